"""Turns a recorded mock cache into the canned-answer cache and scores it.

usage: make_cache.py RAW_CACHE_DIR REPORT_JSONL

Every answer-generation response in RAW_CACHE_DIR/responses.jsonl is replaced
by a canned completion (exact, article-wrapped, partial, wrong, empty, ...).
The result goes to ./cache/responses.jsonl. expected.json holds EM, F1 and
recall@k computed here by brute force from the canned answers and the ranked
lists recorded in REPORT_JSONL.
"""
import collections
import json
import pathlib
import re
import string
import sys

CUTOFFS = [1, 2, 5, 8, 10]


def normalize_answer(s):
    s = s.lower()
    s = "".join(ch for ch in s if ch not in set(string.punctuation))
    s = re.sub(r"\b(a|an|the)\b", " ", s)
    return " ".join(s.split())


def token_f1(pred, gold):
    p = normalize_answer(pred).split()
    g = normalize_answer(gold).split()
    if not p or not g:
        return 1.0 if not p and not g else 0.0
    num_same = sum((collections.Counter(p) & collections.Counter(g)).values())
    if num_same == 0:
        return 0.0
    precision = 1.0 * num_same / len(p)
    recall = 1.0 * num_same / len(g)
    return (2 * precision * recall) / (precision + recall)


def canned(n, gold):
    style = n % 6
    if style == 0:
        return gold
    if style == 1:
        return f"The {gold}."
    if style == 2:
        return f"{gold} in the north"
    if style == 3:
        return "Unknown Place"
    if style == 4:
        return ""
    return f"{gold.lower()} town"


def main():
    raw_dir, report_path = pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2])
    here = pathlib.Path(__file__).parent
    dataset = {r["_id"]: r for r in json.loads((here / "slice.json").read_text())}
    rows = [json.loads(line) for line in report_path.read_text().splitlines()[1:]]

    by_question = {}
    for n, row in enumerate(sorted(rows, key=lambda r: r["question_id"])):
        by_question[row["question"]] = (row["question_id"], canned(n, dataset[row["question_id"]]["answer"]))

    out_lines = []
    replaced = 0
    for line in (raw_dir / "responses.jsonl").read_text().splitlines():
        rec = json.loads(line)
        req = rec["request"]
        if rec["kind"] == "chat" and req["template_version"].startswith("answer/"):
            question = req["user"].rsplit("Question: ", 1)[1].strip()
            _, answer = by_question[question]
            rec["response"] = f"Based on the passages above.\nAnswer: {answer}"
            replaced += 1
        out_lines.append(json.dumps(rec, separators=(",", ":"), ensure_ascii=False))
    assert replaced == len(rows), (replaced, len(rows))
    (here / "cache").mkdir(exist_ok=True)
    (here / "cache" / "responses.jsonl").write_text("\n".join(out_lines) + "\n")

    em_sum = f1_sum = 0.0
    recall_sum = {k: 0.0 for k in CUTOFFS}
    per_query = {}
    for row in sorted(rows, key=lambda r: r["question_id"]):
        qid = row["question_id"]
        gold = dataset[qid]["answer"]
        _, pred = by_question[row["question"]]
        em = int(normalize_answer(pred) == normalize_answer(gold))
        f1 = token_f1(pred, gold)
        ranked = row["ranked_passage_ids"]
        gold_ids = set(row["gold_passage_ids"])
        recall = {k: int(any(p in gold_ids for p in ranked[:k])) for k in CUTOFFS}
        em_sum += em
        f1_sum += f1
        for k in CUTOFFS:
            recall_sum[k] += recall[k]
        per_query[qid] = {"prediction": pred, "em": em, "f1": f1, "ranked_passage_ids": ranked,
                          "recall": {str(k): v for k, v in recall.items()}}
    n = len(rows)
    expected = {
        "summary": {"n_queries": n, "em": em_sum / n, "f1": f1_sum / n,
                    "recall_at": {str(k): recall_sum[k] / n for k in CUTOFFS}},
        "per_query": per_query,
    }
    (here / "expected.json").write_text(json.dumps(expected, indent=1) + "\n")


if __name__ == "__main__":
    main()
