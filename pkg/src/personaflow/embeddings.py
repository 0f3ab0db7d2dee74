"""Text and entity vectorization.

Covers four surfaces:

* word-vector tables (load/save, averaged text encodings),
* a tf-idf vectorizer with a document-frequency cutoff,
* the shallow entity-embedding network (tf-idf in, class softmax out,
  64-dim penultimate activations as the embedding),
* the external-encoding import format for precomputed per-user vectors.

Word-vector files: first line ``N dim``, then ``token v1 ... v_dim`` per
line, space-separated.  External-encoding files: first line ``dim``, then
``user_id v1 ... v_dim`` per line.

All training randomness flows through NumPy PCG64 generators seeded via
``SeedSequence``, so a fixed seed reproduces weights bit for bit.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import SchemaError, ValidationError

EMBEDDING_DIM = 64
N_CLASSES = 4


# ---------------------------------------------------------------------------
# Word-vector tables


@dataclass
class WordVectorTable:
    """Token -> dense vector, all of one declared dimensionality."""

    dim: int
    entries: dict[str, np.ndarray] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)


def load_word_vectors(path: str | Path) -> WordVectorTable:
    """Parse a word-vector file, rejecting malformed lines with their numbers."""
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read word vectors {path}: {exc}") from None
    with handle:
        header = handle.readline().split()
        if len(header) != 2:
            raise SchemaError("word vectors line 1: header must be 'N dim'")
        try:
            n_tokens, dim = int(header[0]), int(header[1])
        except ValueError:
            raise SchemaError("word vectors line 1: header must be two integers") from None
        if dim <= 0:
            raise SchemaError("word vectors line 1: dim must be positive")
        table = WordVectorTable(dim=dim)
        for line_no, line in enumerate(handle, start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != dim + 1:
                raise SchemaError(
                    f"word vectors line {line_no}: expected {dim + 1} fields, got {len(parts)}"
                )
            token = parts[0]
            if token in table.entries:
                raise SchemaError(f"word vectors line {line_no}: duplicate token {token!r}")
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError:
                raise SchemaError(f"word vectors line {line_no}: non-numeric value") from None
            table.entries[token] = vec
    if len(table) != n_tokens:
        raise SchemaError(f"word vectors: header declared {n_tokens} tokens, found {len(table)}")
    return table


def save_word_vectors(table: WordVectorTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{len(table)} {table.dim}\n")
        for token, vec in table.entries.items():
            handle.write(token + " " + " ".join(repr(float(v)) for v in vec) + "\n")


def encode_text_avg(tokens: Sequence[str], table: WordVectorTable) -> np.ndarray:
    """Mean of the in-vocabulary token vectors; zero vector when none match."""
    hits = [table.entries[t] for t in tokens if t in table.entries]
    if not hits:
        return np.zeros(table.dim, dtype=np.float64)
    return np.mean(hits, axis=0)


def encode_tweets_avg(tweet_tokens: Iterable[Sequence[str]], table: WordVectorTable) -> np.ndarray:
    """Per-user tweet encoding: mean over tweets of the per-tweet encodings."""
    rows = [encode_text_avg(tokens, table) for tokens in tweet_tokens]
    if not rows:
        return np.zeros(table.dim, dtype=np.float64)
    return np.mean(rows, axis=0)


# ---------------------------------------------------------------------------
# tf-idf


@dataclass
class TfidfModel:
    """Vocabulary and document frequencies fitted under a min_df cutoff."""

    vocabulary: list[str]
    document_frequency: np.ndarray
    n_docs: int
    min_df: float
    token_index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.token_index = {t: i for i, t in enumerate(self.vocabulary)}

    @property
    def dim(self) -> int:
        return len(self.vocabulary)

    def idf(self) -> np.ndarray:
        return np.log((1.0 + self.n_docs) / (1.0 + self.document_frequency)) + 1.0


def fit_tfidf(docs: Sequence[Sequence[str]], min_df: float = 0.02) -> TfidfModel:
    """Fit vocabulary and document frequencies over token-list documents.

    Tokens whose document frequency fraction is below ``min_df`` are
    dropped; the surviving vocabulary is sorted lexicographically.
    """
    if len(docs) == 0:
        raise ValidationError("fit_tfidf: empty corpus")
    df: dict[str, int] = {}
    for doc in docs:
        for token in set(doc):
            df[token] = df.get(token, 0) + 1
    n = len(docs)
    vocabulary = sorted(t for t, c in df.items() if c / n >= min_df)
    freq = np.array([df[t] for t in vocabulary], dtype=np.float64)
    return TfidfModel(vocabulary=vocabulary, document_frequency=freq, n_docs=n, min_df=min_df)


def tfidf_transform(doc: Sequence[str], model: TfidfModel) -> np.ndarray:
    """tf * smoothed-idf weights, L2-normalized when nonzero.

    Out-of-vocabulary tokens are ignored; an empty or fully-unknown doc maps
    to the zero vector.
    """
    vec = np.zeros(model.dim, dtype=np.float64)
    for token in doc:
        idx = model.token_index.get(token)
        if idx is not None:
            vec[idx] += 1.0
    if vec.any():
        vec *= model.idf()
        vec /= np.linalg.norm(vec)
    return vec


def tfidf_transform_many(docs: Sequence[Sequence[str]], model: TfidfModel) -> sparse.csr_matrix:
    """Transform a batch of documents into a sparse (n_docs, dim) matrix."""
    rows = [tfidf_transform(doc, model) for doc in docs]
    dense = np.vstack(rows) if rows else np.zeros((0, model.dim))
    return sparse.csr_matrix(dense)


# ---------------------------------------------------------------------------
# Entity embedder network


@dataclass(frozen=True)
class EmbedderHyper:
    """Optimizer and schedule settings for entity-embedder training."""

    learning_rate: float = 1e-3
    batch_size: int = 64
    epochs: int = 20
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    hidden1: int = 256


@dataclass
class EntityEmbedder:
    """tf-idf front end plus a V->256->64->4 network; the 64-dim penultimate
    activations are the entity embedding."""

    tfidf: TfidfModel
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    embedding_dim: int = EMBEDDING_DIM

    def __post_init__(self) -> None:
        shapes = [w.shape for w in self.weights]
        for (a, b), (c, _) in zip(shapes, shapes[1:]):
            if b != c:
                raise ValidationError(f"embedder layer shapes do not chain: {shapes}")
        if shapes[-2][1] != self.embedding_dim:
            raise ValidationError(
                f"penultimate width {shapes[-2][1]} != embedding_dim {self.embedding_dim}"
            )


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def _glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def init_network(input_dim: int, hyper: EmbedderHyper, seed: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Glorot-uniform weights, zero biases, layer widths V->h1->64->4."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    widths = [input_dim, hyper.hidden1, EMBEDDING_DIM, N_CLASSES]
    weights = [_glorot_uniform(rng, a, b) for a, b in zip(widths, widths[1:])]
    biases = [np.zeros(b, dtype=np.float64) for b in widths[1:]]
    return weights, biases


def _forward(
    x: np.ndarray, weights: list[np.ndarray], biases: list[np.ndarray]
) -> tuple[np.ndarray, list[np.ndarray], list[np.ndarray]]:
    """Forward pass returning probabilities plus the per-layer pre/post activations."""
    pre: list[np.ndarray] = []
    post: list[np.ndarray] = []
    a = x
    for i, (w, b) in enumerate(zip(weights, biases)):
        z = a @ w + b
        pre.append(z)
        if i < len(weights) - 1:
            a = np.maximum(z, 0.0)
        else:
            a = softmax(z)
        post.append(a)
    return a, pre, post


def loss_and_gradients(
    x: np.ndarray,
    y: np.ndarray,
    weights: list[np.ndarray],
    biases: list[np.ndarray],
) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
    """Mean cross-entropy over the batch and its analytic parameter gradients."""
    n = x.shape[0]
    probs, pre, post = _forward(x, weights, biases)
    eps = 1e-300
    loss = float(-np.mean(np.log(probs[np.arange(n), y] + eps)))

    grad_w: list[np.ndarray] = [np.empty(0)] * len(weights)
    grad_b: list[np.ndarray] = [np.empty(0)] * len(biases)
    onehot = np.zeros_like(probs)
    onehot[np.arange(n), y] = 1.0
    delta = (probs - onehot) / n
    for i in range(len(weights) - 1, -1, -1):
        inputs = x if i == 0 else post[i - 1]
        grad_w[i] = inputs.T @ delta
        grad_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ weights[i].T) * (pre[i - 1] > 0.0)
    return loss, grad_w, grad_b


def mean_cross_entropy(
    x: np.ndarray, y: np.ndarray, weights: list[np.ndarray], biases: list[np.ndarray]
) -> float:
    probs, _, _ = _forward(x, weights, biases)
    return float(-np.mean(np.log(probs[np.arange(x.shape[0]), y] + 1e-300)))


def train_entity_embedder(
    X,
    y: Sequence[int],
    tfidf: TfidfModel,
    hyper: EmbedderHyper | None = None,
    seed: int = 0,
) -> tuple[EntityEmbedder, list[float]]:
    """Train the embedding network with mini-batch Adam.

    Returns the embedder plus the post-epoch full-set loss trace.  The
    update loop is a single logical sequence: a fixed seed reproduces the
    exact weights.
    """
    hyper = hyper or EmbedderHyper()
    X = np.asarray(X.toarray() if sparse.issparse(X) else X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.shape[0] != y.shape[0] or X.shape[0] == 0:
        raise ValidationError("train_entity_embedder: X and y must be nonempty and aligned")
    present = set(int(c) for c in y)
    missing = sorted(set(range(N_CLASSES)) - present)
    if missing:
        raise ValidationError(f"train_entity_embedder: classes absent from y: {missing}")

    weights, biases = init_network(X.shape[1], hyper, seed)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, 1))))

    m_w = [np.zeros_like(w) for w in weights]
    v_w = [np.zeros_like(w) for w in weights]
    m_b = [np.zeros_like(b) for b in biases]
    v_b = [np.zeros_like(b) for b in biases]
    t = 0
    losses: list[float] = []
    n = X.shape[0]
    batch = max(1, min(hyper.batch_size, n))
    for _ in range(hyper.epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch):
            idx = order[start : start + batch]
            _, gw, gb = loss_and_gradients(X[idx], y[idx], weights, biases)
            t += 1
            bc1 = 1.0 - hyper.beta1**t
            bc2 = 1.0 - hyper.beta2**t
            for params, grads, ms, vs in (
                (weights, gw, m_w, v_w),
                (biases, gb, m_b, v_b),
            ):
                for j, g in enumerate(grads):
                    ms[j] = hyper.beta1 * ms[j] + (1.0 - hyper.beta1) * g
                    vs[j] = hyper.beta2 * vs[j] + (1.0 - hyper.beta2) * g * g
                    params[j] -= (
                        hyper.learning_rate * (ms[j] / bc1) / (np.sqrt(vs[j] / bc2) + hyper.eps)
                    )
        losses.append(mean_cross_entropy(X, y, weights, biases))
    return EntityEmbedder(tfidf=tfidf, weights=weights, biases=biases), losses


def embed_entity(doc: Sequence[str], embedder: EntityEmbedder) -> np.ndarray:
    """Penultimate-layer activations for one entity document (all >= 0)."""
    x = tfidf_transform(doc, embedder.tfidf)
    _, _, post = _forward(x[None, :], embedder.weights, embedder.biases)
    return post[-2][0]


def predict_classes(X, embedder: EntityEmbedder) -> np.ndarray:
    X = np.asarray(X.toarray() if sparse.issparse(X) else X, dtype=np.float64)
    probs, _, _ = _forward(X, embedder.weights, embedder.biases)
    return probs.argmax(axis=1)


# ---------------------------------------------------------------------------
# Embedder serialization

_EMBEDDER_FORMAT = 1


def save_embedder(embedder: EntityEmbedder, path: str | Path) -> None:
    payload = {
        "format": _EMBEDDER_FORMAT,
        "tfidf": {
            "vocabulary": embedder.tfidf.vocabulary,
            "document_frequency": embedder.tfidf.document_frequency.tolist(),
            "n_docs": embedder.tfidf.n_docs,
            "min_df": embedder.tfidf.min_df,
        },
        "shapes": [list(w.shape) for w in embedder.weights],
        "weights": [w.reshape(-1).tolist() for w in embedder.weights],
        "biases": [b.tolist() for b in embedder.biases],
        "embedding_dim": embedder.embedding_dim,
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle)


def load_embedder(path: str | Path) -> EntityEmbedder:
    with open(path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    if payload.get("format") != _EMBEDDER_FORMAT:
        raise SchemaError(f"embedder file {path}: unsupported format {payload.get('format')!r}")
    tfidf = TfidfModel(
        vocabulary=list(payload["tfidf"]["vocabulary"]),
        document_frequency=np.array(payload["tfidf"]["document_frequency"], dtype=np.float64),
        n_docs=int(payload["tfidf"]["n_docs"]),
        min_df=float(payload["tfidf"]["min_df"]),
    )
    weights = [
        np.array(flat, dtype=np.float64).reshape(shape)
        for flat, shape in zip(payload["weights"], payload["shapes"])
    ]
    biases = [np.array(b, dtype=np.float64) for b in payload["biases"]]
    return EntityEmbedder(
        tfidf=tfidf,
        weights=weights,
        biases=biases,
        embedding_dim=int(payload["embedding_dim"]),
    )


# ---------------------------------------------------------------------------
# External per-user encodings


def import_external_encodings(path: str | Path, expected_dim: int) -> dict[str, np.ndarray]:
    """Read precomputed per-user vectors, enforcing the declared dimension."""
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read encodings {path}: {exc}") from None
    with handle:
        header = handle.readline().split()
        if len(header) != 1:
            raise SchemaError("encodings line 1: header must be a single integer dim")
        try:
            dim = int(header[0])
        except ValueError:
            raise SchemaError("encodings line 1: header must be an integer") from None
        if dim != expected_dim:
            raise SchemaError(f"encodings: declared dim {dim} != expected {expected_dim}")
        result: dict[str, np.ndarray] = {}
        for line_no, line in enumerate(handle, start=2):
            if not line.strip():
                continue
            parts = line.split()
            user_id = parts[0]
            if len(parts) != dim + 1:
                raise SchemaError(
                    f"encodings line {line_no}: user {user_id!r} has {len(parts) - 1} values, "
                    f"expected {dim}"
                )
            if user_id in result:
                raise SchemaError(f"encodings line {line_no}: duplicate user {user_id!r}")
            try:
                result[user_id] = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError:
                raise SchemaError(
                    f"encodings line {line_no}: non-numeric value for user {user_id!r}"
                ) from None
    return result


def export_encodings(encodings: dict[str, np.ndarray], dim: int, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{dim}\n")
        for user_id, vec in encodings.items():
            handle.write(user_id + " " + " ".join(repr(float(v)) for v in vec) + "\n")
