"""Stage implementations behind the CLI commands.

Stages communicate through files under the configured output directory:

    corpus/filtered.jsonl      eligible users, English tweets only
    corpus/split.json          split manifest (seed, counts, user ids)
    corpus/ingest_meta.json    drop counts and thresholds
    features/*.npy             per-user feature matrices (row-aligned)
    features/user_ids.json     row order for every feature matrix
    features/entity_docs.jsonl per-user hashtag/url/mention token lists
    features/meta.json         encoder source, dims, seed
    embedders/{kind}.json      trained entity embedders
    features/emb_{kind}.npy    64-dim embeddings for all users
    models/*.json              trained classifiers and their metrics
    ablation/report.csv|json   the configuration x classifier grid
    analysis/analysis.json     analysis tables as data
    report/...                 rendered bundle

Every artifact is deterministic for a fixed config and seed: timestamps go
only to the structured stderr log.  Per-user feature extraction is pure,
so the worker count never changes results.
"""
from __future__ import annotations

import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import embeddings as emb
from . import textproc
from .analysis import (
    ClassTokenScore,
    ReadabilityTable,
    bundled_stopwords,
    metadata_stats,
    profession_scores,
    readability_table,
)
from .config import RunConfig
from .corpus import (
    CorpusSplit,
    PersonalityClass,
    UserRecord,
    balanced_split,
    filter_eligible,
    read_jsonl,
    write_jsonl,
)
from .errors import ArtifactError, ConfigError
from .lexicon import Lexicon, bundled_lexicon, distinct_categories, load_lexicon, score_categories
from .model.ablation import AblationReport, AblationRow, cell_seed, run_ablation, write_report_csv
from .model.features import PRESETS, FeatureArtifacts, assemble_matrix
from .model.forest import ForestParams, save_forest, train_random_forest
from .model.gbdt import GbdtParams, save_gbdt, train_gbdt
from .model.metrics import Metrics, evaluate
from .readability import FamiliarLists, METRIC_NAMES, bundled_familiar_lists, load_word_list
from .report import AnalysisBundle, emit_report

ENTITY_KINDS = ("url", "hashtag", "mention")


def log(event: str, **fields) -> None:
    record = {"ts": round(time.time(), 3), "event": event}
    record.update(fields)
    print(json.dumps(record, ensure_ascii=False), file=sys.stderr, flush=True)


def _write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _require_file(path: Path, produced_by: str) -> Path:
    if not path.exists():
        raise ArtifactError(
            f"missing upstream artifact {path}; run `personaflow {produced_by}` first"
        )
    return path


# ---------------------------------------------------------------------------
# ingest


def stage_ingest(cfg: RunConfig) -> None:
    corpus_path = cfg.paths.get("corpus")
    if corpus_path is None:
        raise ConfigError("missing config key: paths.corpus (required by ingest)")
    out = cfg.output / "corpus"
    out.mkdir(parents=True, exist_ok=True)

    users = list(read_jsonl(corpus_path))
    eligible = filter_eligible(users, cfg.min_english_tweets)
    split = balanced_split(eligible, cfg.train_per_class, cfg.test_per_class, cfg.seed)
    for warning in split.warnings:
        log("split_warning", detail=warning)

    with open(out / "filtered.jsonl", "w", encoding="utf-8", newline="\n") as handle:
        write_jsonl(eligible, handle)
    _write_json(out / "split.json", split.manifest())
    _write_json(
        out / "ingest_meta.json",
        {
            "seed": cfg.seed,
            "source": str(corpus_path),
            "users_read": len(users),
            "users_eligible": len(eligible),
            "min_english_tweets": cfg.min_english_tweets,
            "train_per_class": cfg.train_per_class,
            "test_per_class": cfg.test_per_class,
        },
    )
    log(
        "ingest_done",
        users_read=len(users),
        users_eligible=len(eligible),
        train=len(split.train),
        test=len(split.test),
    )


def load_filtered_corpus(cfg: RunConfig) -> list[UserRecord]:
    path = _require_file(cfg.output / "corpus" / "filtered.jsonl", "ingest")
    return list(read_jsonl(path))


def load_split(cfg: RunConfig, users: list[UserRecord]) -> CorpusSplit:
    path = _require_file(cfg.output / "corpus" / "split.json", "ingest")
    manifest = json.loads(path.read_text(encoding="utf-8"))
    by_id = {u.user_id: u for u in users}
    try:
        train = [by_id[uid] for uid in manifest["train_user_ids"]]
        test = [by_id[uid] for uid in manifest["test_user_ids"]]
    except KeyError as exc:
        raise ArtifactError(
            f"split manifest references unknown user {exc.args[0]!r}; re-run ingest"
        ) from None
    return CorpusSplit(
        train=train,
        test=test,
        seed=int(manifest["seed"]),
        warnings=list(manifest.get("warnings", [])),
    )


# ---------------------------------------------------------------------------
# featurize

_WORKER_STATE: dict = {}


def _load_shared_state(cfg_like: dict) -> dict:
    lexicon = (
        load_lexicon(cfg_like["lexicon"]) if cfg_like["lexicon"] else bundled_lexicon()
    )
    if cfg_like["dale_list"] or cfg_like["spache_list"]:
        bundled = bundled_familiar_lists()
        familiar = FamiliarLists(
            dale=load_word_list(cfg_like["dale_list"]) if cfg_like["dale_list"] else bundled.dale,
            spache=(
                load_word_list(cfg_like["spache_list"]) if cfg_like["spache_list"] else bundled.spache
            ),
        )
    else:
        familiar = bundled_familiar_lists()
    table = emb.load_word_vectors(cfg_like["word_vectors"]) if cfg_like["word_vectors"] else None
    return {
        "lexicon": lexicon,
        "familiar": familiar,
        "table": table,
        "term_index": lexicon.term_index(),
    }


def _init_worker(cfg_like: dict) -> None:
    _WORKER_STATE.update(_load_shared_state(cfg_like))


def _featurize_user(payload: tuple[str, str, list[str]]) -> dict:
    """Extract all native per-user features; pure given the shared state."""
    from .readability import compute_readability

    user_id, description, tweets = payload
    state = _WORKER_STATE
    lexicon: Lexicon = state["lexicon"]
    term_index = state["term_index"]
    familiar: FamiliarLists = state["familiar"]
    table = state["table"]

    hashtags: list[str] = []
    urls: list[str] = []
    mentions: list[str] = []
    all_tokens: list[str] = []
    read_rows: list[np.ndarray] = []
    tweet_encs: list[np.ndarray] = []
    for tweet in tweets:
        sep = textproc.separate_entities(tweet)
        hashtags.extend(sep.hashtags)
        urls.extend(sep.urls)
        mentions.extend(sep.mentions)
        clean = textproc.normalize(sep.clean_text)
        tokens = textproc.tokenize(clean)
        all_tokens.extend(tokens)
        if tokens:
            read_rows.append(compute_readability(clean, familiar).to_vector())
        if table is not None:
            tweet_encs.append(emb.encode_text_avg(tokens, table))

    if read_rows:
        readability_vec = np.mean(read_rows, axis=0)
        scoreable = True
    else:
        readability_vec = np.zeros(len(METRIC_NAMES))
        scoreable = False

    if all_tokens:
        empath_vec = np.zeros(lexicon.size)
        for token in all_tokens:
            for cat in term_index.get(token, ()):
                empath_vec[cat] += 1.0
        empath_vec /= len(all_tokens)
    else:
        empath_vec = np.zeros(lexicon.size)

    result = {
        "user_id": user_id,
        "readability": readability_vec,
        "empath": empath_vec,
        "scoreable": scoreable,
        "hashtags": hashtags,
        "urls": urls,
        "mentions": mentions,
    }
    if table is not None:
        result["tweets_enc"] = (
            np.mean(tweet_encs, axis=0) if tweet_encs else np.zeros(table.dim)
        )
        desc_tokens = textproc.tokenize(
            textproc.normalize(textproc.separate_entities(description).clean_text)
        )
        result["desc_enc"] = emb.encode_text_avg(desc_tokens, table)
    return result


def _cfg_like(cfg: RunConfig) -> dict:
    return {
        "lexicon": str(cfg.paths["lexicon"]) if cfg.paths.get("lexicon") else None,
        "dale_list": str(cfg.paths["dale_list"]) if cfg.paths.get("dale_list") else None,
        "spache_list": str(cfg.paths["spache_list"]) if cfg.paths.get("spache_list") else None,
        "word_vectors": str(cfg.paths["word_vectors"]) if cfg.paths.get("word_vectors") else None,
    }


def _declared_dim(path: Path) -> int:
    with open(path, "r", encoding="utf-8") as handle:
        return int(handle.readline().split()[0])


def stage_featurize(cfg: RunConfig) -> None:
    users = load_filtered_corpus(cfg)
    if not users:
        raise ArtifactError("filtered corpus is empty; nothing to featurize")

    external_tweets = cfg.paths.get("external_tweet_encodings")
    external_desc = cfg.paths.get("external_description_encodings")
    native = cfg.paths.get("word_vectors") is not None
    if not native and external_tweets is None:
        raise ConfigError(
            "featurize needs paths.word_vectors or paths.external_tweet_encodings"
        )

    cfg_like = _cfg_like(cfg)
    if external_tweets is not None:
        cfg_like["word_vectors"] = None  # text encodings come from the external file

    payloads = [(u.user_id, u.description, u.tweets) for u in users]
    workers = cfg.effective_workers()
    if workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=(cfg_like,)
        ) as pool:
            rows = list(pool.map(_featurize_user, payloads, chunksize=64))
    else:
        _init_worker(cfg_like)
        rows = [_featurize_user(p) for p in payloads]

    user_ids = [r["user_id"] for r in rows]
    encoder = "wordvec"
    dropped = 0
    if external_tweets is not None:
        encoder = "external"
        dim = _declared_dim(external_tweets)
        tweets_map = emb.import_external_encodings(external_tweets, dim)
        desc_map = None
        if external_desc is not None:
            desc_map = emb.import_external_encodings(external_desc, dim)
        covered = [
            r for r in rows
            if r["user_id"] in tweets_map and (desc_map is None or r["user_id"] in desc_map)
        ]
        dropped = len(rows) - len(covered)
        if dropped:
            log("featurize_dropped_missing_encoding", count=dropped)
        rows = covered
        user_ids = [r["user_id"] for r in rows]
        tweets_enc = np.vstack([tweets_map[uid] for uid in user_ids])
        desc_enc = (
            np.vstack([desc_map[uid] for uid in user_ids]) if desc_map is not None else None
        )
    else:
        tweets_enc = np.vstack([r["tweets_enc"] for r in rows])
        desc_enc = np.vstack([r["desc_enc"] for r in rows])

    by_id = {u.user_id: u for u in users}
    counts = np.vstack([by_id[uid].counts.to_vector() for uid in user_ids])
    readability = np.vstack([r["readability"] for r in rows])
    empath = np.vstack([r["empath"] for r in rows])
    unscoreable = sum(1 for r in rows if not r["scoreable"])
    if unscoreable:
        log("featurize_unscoreable_users", count=unscoreable)

    out = cfg.output / "features"
    out.mkdir(parents=True, exist_ok=True)
    np.save(out / "readability.npy", readability)
    np.save(out / "empath.npy", empath)
    np.save(out / "counts.npy", counts)
    np.save(out / "tweets_enc.npy", tweets_enc)
    if desc_enc is not None:
        np.save(out / "desc_enc.npy", desc_enc)
    elif (out / "desc_enc.npy").exists():
        (out / "desc_enc.npy").unlink()
    _write_json(out / "user_ids.json", user_ids)
    with open(out / "entity_docs.jsonl", "w", encoding="utf-8", newline="\n") as handle:
        for r in rows:
            handle.write(
                json.dumps(
                    {
                        "user_id": r["user_id"],
                        "hashtags": r["hashtags"],
                        "urls": r["urls"],
                        "mentions": r["mentions"],
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    _write_json(
        out / "meta.json",
        {
            "seed": cfg.seed,
            "encoder": encoder,
            "text_dim": int(tweets_enc.shape[1]),
            "has_description_encoding": desc_enc is not None,
            "n_users": len(user_ids),
            "dropped_missing_encoding": dropped,
            "unscoreable_users": unscoreable,
        },
    )
    log("featurize_done", n_users=len(user_ids), encoder=encoder, text_dim=int(tweets_enc.shape[1]))


# ---------------------------------------------------------------------------
# embed-train


def _load_entity_docs(cfg: RunConfig) -> dict[str, dict[str, list[str]]]:
    path = _require_file(cfg.output / "features" / "entity_docs.jsonl", "featurize")
    docs: dict[str, dict[str, list[str]]] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                obj = json.loads(line)
                docs[obj["user_id"]] = obj
    return docs


def stage_embed_train(cfg: RunConfig) -> None:
    users = load_filtered_corpus(cfg)
    split = load_split(cfg, users)
    docs = _load_entity_docs(cfg)
    user_ids = json.loads(
        _require_file(cfg.output / "features" / "user_ids.json", "featurize").read_text()
    )
    missing = [u.user_id for u in split.train if u.user_id not in docs]
    if missing:
        raise ArtifactError(
            f"entity docs missing for {len(missing)} train users (e.g. {missing[0]!r}); "
            "re-run featurize"
        )

    hyper = emb.EmbedderHyper(**cfg.embedder_params) if cfg.embedder_params else emb.EmbedderHyper()
    out_embedders = cfg.output / "embedders"
    out_embedders.mkdir(parents=True, exist_ok=True)
    out_features = cfg.output / "features"

    key = {"url": "urls", "hashtag": "hashtags", "mention": "mentions"}
    y_train = np.array([int(u.personality) for u in split.train])
    meta: dict[str, dict] = {}
    for kind_index, kind in enumerate(ENTITY_KINDS):
        train_docs = [docs[u.user_id][key[kind]] for u in split.train]
        tfidf = emb.fit_tfidf(train_docs, min_df=cfg.min_df)
        X_train = emb.tfidf_transform_many(train_docs, tfidf)
        embedder, losses = emb.train_entity_embedder(
            X_train,
            y_train,
            tfidf,
            hyper,
            seed=int(
                np.random.SeedSequence((cfg.seed, 100 + kind_index)).generate_state(1)[0]
            ),
        )
        emb.save_embedder(embedder, out_embedders / f"{kind}.json")
        vectors = np.vstack(
            [emb.embed_entity(docs[uid][key[kind]], embedder) for uid in user_ids]
        )
        np.save(out_features / f"emb_{kind}.npy", vectors)
        train_acc = float(
            (emb.predict_classes(X_train, embedder) == y_train).mean()
        )
        meta[kind] = {
            "vocabulary_size": tfidf.dim,
            "final_loss": losses[-1] if losses else None,
            "train_accuracy": train_acc,
        }
        log("embedder_trained", kind=kind, vocab=tfidf.dim, train_accuracy=round(train_acc, 4))
    _write_json(out_embedders / "meta.json", {"seed": cfg.seed, "entities": meta})


# ---------------------------------------------------------------------------
# artifact loading for train/ablate


def load_feature_artifacts(cfg: RunConfig) -> FeatureArtifacts:
    out = cfg.output / "features"
    user_ids = json.loads(_require_file(out / "user_ids.json", "featurize").read_text())

    def load(name: str, produced_by: str, optional: bool = False) -> np.ndarray | None:
        path = out / name
        if optional and not path.exists():
            return None
        return np.load(_require_file(path, produced_by))

    return FeatureArtifacts(
        user_ids=user_ids,
        tweets_enc=load("tweets_enc.npy", "featurize"),
        desc_enc=load("desc_enc.npy", "featurize", optional=True),
        empath=load("empath.npy", "featurize"),
        readability=load("readability.npy", "featurize"),
        counts=load("counts.npy", "featurize"),
        url_emb=load("emb_url.npy", "embed-train"),
        hashtag_emb=load("emb_hashtag.npy", "embed-train"),
        mention_emb=load("emb_mention.npy", "embed-train"),
    )


def _restrict_split(split: CorpusSplit, artifacts: FeatureArtifacts) -> CorpusSplit:
    """Drop split users without feature rows (e.g. missing external encodings)."""
    train = [u for u in split.train if u.user_id in artifacts.row_of]
    test = [u for u in split.test if u.user_id in artifacts.row_of]
    dropped = len(split.train) - len(train) + len(split.test) - len(test)
    if dropped:
        log("split_users_without_features", count=dropped)
    return CorpusSplit(train=train, test=test, seed=split.seed, warnings=split.warnings)


def _encoder_name(cfg: RunConfig) -> str:
    meta_path = cfg.output / "features" / "meta.json"
    if meta_path.exists():
        return json.loads(meta_path.read_text()).get("encoder", "wordvec")
    return "wordvec"


# ---------------------------------------------------------------------------
# train / ablate


def stage_train(cfg: RunConfig, preset: str, classifiers: list[str] | None = None) -> None:
    users = load_filtered_corpus(cfg)
    split = load_split(cfg, users)
    artifacts = load_feature_artifacts(cfg)
    split = _restrict_split(split, artifacts)
    config = PRESETS[preset]
    names = classifiers or cfg.classifiers

    out = cfg.output / "models"
    out.mkdir(parents=True, exist_ok=True)
    train_ids = [u.user_id for u in split.train]
    test_ids = [u.user_id for u in split.test]
    y_train = np.array([int(u.personality) for u in split.train])
    y_test = np.array([int(u.personality) for u in split.test])
    X_train, segments = assemble_matrix(train_ids, artifacts, config)
    X_test, _ = assemble_matrix(test_ids, artifacts, config)

    for name in names:
        seed = cell_seed(cfg.seed, preset, name)
        params = cfg.classifier_params.get(name)
        if name == "random_forest":
            model = train_random_forest(
                X_train, y_train, ForestParams(**(params or {})), seed=seed, n_classes=4
            )
            save_forest(model, out / f"{preset}__random_forest.json")
        else:
            model = train_gbdt(
                X_train, y_train, GbdtParams(**(params or {})), seed=seed, n_classes=4
            )
            save_gbdt(model, out / f"{preset}__gbdt.json")
        metrics = evaluate(model.predict(X_test), y_test)
        _write_json(
            out / f"{preset}__{name}_metrics.json",
            {
                "seed": cfg.seed,
                "cell_seed": seed,
                "preset": preset,
                "classifier": name,
                "encoder": _encoder_name(cfg),
                "feature_length": int(sum(s.length for s in segments)),
                "metrics": metrics.to_dict(),
            },
        )
        log(
            "trained",
            preset=preset,
            classifier=name,
            macro_f1=round(metrics.macro_f1, 4),
            accuracy=round(metrics.accuracy, 4),
        )


def stage_ablate(cfg: RunConfig) -> AblationReport:
    """featurize + embed-train + the full grid, writing the report artifacts."""
    stage_featurize(cfg)
    stage_embed_train(cfg)
    users = load_filtered_corpus(cfg)
    split = load_split(cfg, users)
    artifacts = load_feature_artifacts(cfg)
    split = _restrict_split(split, artifacts)

    report = run_ablation(
        split,
        artifacts,
        configs=cfg.ablation_configs,
        classifiers=cfg.classifiers,
        seed=cfg.seed,
        encoder=_encoder_name(cfg),
        classifier_params=cfg.classifier_params,
        progress=lambda cell: log("ablation_cell", cell=cell),
    )
    out = cfg.output / "ablation"
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "report.csv", "w", encoding="utf-8", newline="\n") as handle:
        write_report_csv(report, handle)
    _write_json(
        out / "report.json",
        {
            "seed": report.seed,
            "encoder": report.encoder,
            "feature_lengths": report.feature_lengths,
            "rows": [
                {
                    "config": row.config,
                    "classifier": row.classifier,
                    "encoder": row.encoder,
                    "metrics": row.metrics.to_dict(),
                }
                for row in report.rows
            ],
        },
    )
    log(
        "ablate_done",
        rows=len(report.rows),
        elapsed=round(report.finished_at - report.started_at, 2),
    )
    return report


# ---------------------------------------------------------------------------
# analyze / report


def stage_analyze(cfg: RunConfig) -> None:
    users = load_filtered_corpus(cfg)
    out_features = cfg.output / "features"
    user_ids = json.loads(
        _require_file(out_features / "user_ids.json", "featurize").read_text()
    )
    readability = np.load(_require_file(out_features / "readability.npy", "featurize"))
    empath = np.load(_require_file(out_features / "empath.npy", "featurize"))

    by_id = {u.user_id: u for u in users}
    classes = [by_id[uid].personality for uid in user_ids]
    descriptions = [by_id[uid].description for uid in user_ids]

    lexicon = (
        load_lexicon(cfg.paths["lexicon"]) if cfg.paths.get("lexicon") else bundled_lexicon()
    )
    stopwords = (
        frozenset(load_word_list(cfg.paths["stopwords"]))
        if cfg.paths.get("stopwords")
        else bundled_stopwords()
    )

    table = readability_table(classes, readability)
    meta_means = metadata_stats([by_id[uid] for uid in user_ids])
    professions = profession_scores(
        descriptions,
        classes,
        min_support=cfg.min_support,
        top_k=cfg.top_k_professions,
        stopwords=stopwords,
    )
    categories = distinct_categories(empath, classes, lexicon, cfg.top_k_categories)

    per_class_counts = {
        cls.label: int(sum(1 for c in classes if c == cls)) for cls in PersonalityClass
    }
    _write_json(
        cfg.output / "analysis" / "analysis.json",
        {
            "seed": cfg.seed,
            "n_users_per_class": per_class_counts,
            "readability": {
                "means": table.means.tolist(),
                "min_class": [c.label for c in table.min_class],
                "max_class": [c.label for c in table.max_class],
            },
            "metadata_means": meta_means.tolist(),
            "professions": {
                cls.label: [
                    {
                        "token": s.token,
                        "probability": s.probability,
                        "support": s.support,
                    }
                    for s in professions[cls]
                ]
                for cls in PersonalityClass
            },
            "distinct_categories": {
                cls.label: categories[cls] for cls in PersonalityClass
            },
        },
    )
    log("analyze_done", users=len(user_ids))


def _load_analysis_bundle(cfg: RunConfig) -> AnalysisBundle:
    path = _require_file(cfg.output / "analysis" / "analysis.json", "analyze")
    payload = json.loads(path.read_text(encoding="utf-8"))
    table = ReadabilityTable(
        means=np.array(payload["readability"]["means"], dtype=np.float64),
        min_class=[PersonalityClass[name.upper()] for name in payload["readability"]["min_class"]],
        max_class=[PersonalityClass[name.upper()] for name in payload["readability"]["max_class"]],
    )
    professions = {
        PersonalityClass[name.upper()]: [
            ClassTokenScore(
                token=s["token"],
                personality=PersonalityClass[name.upper()],
                probability=float(s["probability"]),
                support=int(s["support"]),
            )
            for s in scores
        ]
        for name, scores in payload["professions"].items()
    }
    categories = {
        PersonalityClass[name.upper()]: list(values)
        for name, values in payload["distinct_categories"].items()
    }
    return AnalysisBundle(
        readability=table,
        metadata_means=np.array(payload["metadata_means"], dtype=np.float64),
        professions=professions,
        distinct_categories=categories,
        seed=int(payload["seed"]),
        n_users_per_class=dict(payload.get("n_users_per_class", {})),
    )


def _load_ablation_report(cfg: RunConfig) -> AblationReport | None:
    path = cfg.output / "ablation" / "report.json"
    if not path.exists():
        return None
    payload = json.loads(path.read_text(encoding="utf-8"))
    rows = [
        AblationRow(
            config=row["config"],
            classifier=row["classifier"],
            encoder=row["encoder"],
            metrics=Metrics(
                macro_f1=float(row["metrics"]["macro_f1"]),
                accuracy=float(row["metrics"]["accuracy"]),
                per_class_f1=np.array(row["metrics"]["per_class_f1"], dtype=np.float64),
                confusion=np.array(row["metrics"]["confusion"], dtype=np.int64),
            ),
        )
        for row in payload["rows"]
    ]
    return AblationReport(
        rows=rows,
        seed=int(payload["seed"]),
        encoder=payload.get("encoder", "wordvec"),
        feature_lengths=dict(payload.get("feature_lengths", {})),
    )


def stage_report(cfg: RunConfig) -> list[Path]:
    bundle = _load_analysis_bundle(cfg)
    ablation = _load_ablation_report(cfg)
    written = emit_report(
        bundle, ablation, cfg.output / "report", render_figures=cfg.render_figures
    )
    log("report_done", files=len(written))
    return written
