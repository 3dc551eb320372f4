#!/usr/bin/env python3
"""Build the offline replay corpus under fixtures/.

Writes one JSON file per recorded API response, named
{endpoint}_{corpusid}_{offset}_{limit}.json, plus a manifest listing every
recording. The corpus is a small, internally consistent citation universe
shaped exactly like Semantic Scholar Graph API responses, so replay mode
exercises the same parsing paths as live mode.

Run from the repo root: python3 tools/build_fixtures.py
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"

VENUES = [
    "Journal of Network Science",
    "Intl. Conference on Information Visualization",
    "Trans. on Knowledge Discovery",
    None,
    "Workshop on Scholarly Data Mining",
]

ADJECTIVES = [
    "Scalable", "Interactive", "Adaptive", "Distributed", "Visual",
    "Incremental", "Probabilistic", "Graph-Based", "Streaming", "Robust",
]
SUBJECTS = [
    "Citation Analysis", "Literature Discovery", "Network Layout",
    "Knowledge Graphs", "Bibliometric Ranking", "Document Clustering",
    "Relevance Modeling", "Exploration Interfaces", "Metadata Curation",
    "Corpus Indexing",
]

FIRST = ["Ada", "Wei", "Priya", "Jonas", "Mara", "Tomás", "Keiko", "Salim", "Ingrid", "Dmitri"]
LAST = ["Okafor", "Lindqvist", "Tanaka", "Petrov", "Marchetti", "Haddad", "Nystrøm", "Varga", "Osei", "Klein"]


def paper_sha(corpus_id: int) -> str:
    return hashlib.sha1(f"corpus:{corpus_id}".encode()).hexdigest()


def s2_url(corpus_id: int) -> str:
    return f"https://www.semanticscholar.org/paper/{paper_sha(corpus_id)}"


def title_for(corpus_id: int) -> str:
    return (
        f"{ADJECTIVES[corpus_id % len(ADJECTIVES)]} "
        f"{SUBJECTS[(corpus_id // 7) % len(SUBJECTS)]}: a Study of Record {corpus_id}"
    )


def authors_for(corpus_id: int) -> list[dict]:
    count = 1 + corpus_id % 4
    names = [
        f"{FIRST[(corpus_id + i) % len(FIRST)]} {LAST[(corpus_id * 3 + i) % len(LAST)]}"
        for i in range(count)
    ]
    return [{"authorId": str(40_000 + corpus_id + i), "name": n} for i, n in enumerate(names)]


# corpus_id -> (year, citation_count). Reference list of 9999 carries the
# spread of counts/years that the ordering-strategy tests rely on, including
# a citation-count tie (1002/1009) and a year tie (1003/1010).
METADATA: dict[int, tuple[int | None, int]] = {
    9999: (2021, 64),
    512: (2019, 9),
    4242: (1998, 23901),
    1001: (1998, 5210),
    1002: (2004, 340),
    1003: (2018, 87),
    1004: (2015, 1750),
    1005: (2020, 12),
    1006: (2016, 998),
    1007: (1999, 23450),
    1008: (2022, 2),
    1009: (2009, 340),
    1010: (2018, 66),
    1011: (2013, 178),
    1012: (2007, 940),
    2001: (2022, 31),
    2002: (2022, 5),
    2003: (2023, 1),
    2004: (2023, 0),
    2005: (2023, 14),
    2006: (2023, 3),
    2007: (2023, 0),
    3001: (1995, 8841),
    3002: (1996, 4402),
}
for i in range(200):
    cid = 5000 + i
    METADATA[cid] = (1999 + (i * 7) % 25, (i * 137) % 4001)

# citing paper -> list of cited papers, in upstream order
REFERENCES: dict[int, list[int]] = {
    9999: [1001 + i for i in range(12)],
    512: [1001, 1003, 3001],
    4242: [1001, 3002],
    1001: [3001, 3002],
    1002: [1001, 3001],
}
# cited paper -> list of citing papers, in upstream order
CITATIONS: dict[int, list[int]] = {
    9999: [2001 + i for i in range(7)],
    512: [],
    4242: [5000 + i for i in range(200)],
    1001: [9999, 512, 1002, 2001, 4242],
    1002: [9999],
}

ABSTRACTS = {
    9999: "We describe a workbench for growing personalized citation networks "
          "one neighborhood at a time, with live metadata and shareable state.",
    512: "A compact survey of associative browsing strategies over scholarly corpora.",
    4242: "Foundational treatment of link-based importance scores for document graphs.",
    1001: "Early results on random-walk centrality applied to bibliographic data.",
    1002: "An empirical comparison of edge-bundling approaches for citation maps.",
}


def summary_payload(corpus_id: int) -> dict:
    year, citation_count = METADATA[corpus_id]
    return {
        "paperId": paper_sha(corpus_id),
        "externalIds": {"CorpusId": corpus_id},
        "url": s2_url(corpus_id),
        "title": title_for(corpus_id),
        "year": year,
        "citationCount": citation_count,
    }


def paper_payload(corpus_id: int) -> dict:
    year, citation_count = METADATA[corpus_id]
    return {
        "paperId": paper_sha(corpus_id),
        "corpusId": corpus_id,
        "externalIds": {"CorpusId": corpus_id},
        "url": s2_url(corpus_id),
        "title": title_for(corpus_id),
        "abstract": ABSTRACTS.get(corpus_id),
        "venue": VENUES[corpus_id % len(VENUES)],
        "year": year,
        "citationCount": citation_count,
        "authors": authors_for(corpus_id),
        "references": [summary_payload(c) for c in REFERENCES.get(corpus_id, [])],
        "citations": [summary_payload(c) for c in CITATIONS.get(corpus_id, [])],
    }


def linked_page(ids: list[int], offset: int, limit: int, key: str) -> dict:
    chunk = ids[offset : offset + limit]
    page = {
        "offset": offset,
        "data": [{key: summary_payload(c)} for c in chunk],
    }
    if offset + limit < len(ids):
        page["next"] = offset + limit
    return page


def write(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def main() -> None:
    FIXTURES_DIR.mkdir(parents=True, exist_ok=True)
    recordings: list[str] = []

    def record(name: str, payload: dict) -> None:
        write(FIXTURES_DIR / name, payload)
        recordings.append(name)

    expandable = sorted(REFERENCES)
    for cid in expandable:
        record(f"paper_{cid}_0_0.json", paper_payload(cid))
        for endpoint, ids, key in (
            ("references", REFERENCES[cid], "citedPaper"),
            ("citations", CITATIONS[cid], "citingPaper"),
        ):
            # pages at the default batch size, through exhaustion
            offset = 0
            while True:
                record(f"{endpoint}_{cid}_{offset}_5.json", linked_page(ids, offset, 5, key))
                offset += 5
                if offset >= len(ids):
                    break
            # candidate-window pages used by the sorting strategies
            offset = 0
            while True:
                record(f"{endpoint}_{cid}_{offset}_50.json", linked_page(ids, offset, 50, key))
                offset += 50
                if offset >= len(ids):
                    break

    manifest = {
        "format": 1,
        "base_url": "https://api.semanticscholar.org/graph/v1",
        "papers": {
            str(cid): {
                "references": len(REFERENCES[cid]),
                "citations": len(CITATIONS[cid]),
            }
            for cid in expandable
        },
        "recordings": sorted(recordings),
    }
    write(FIXTURES_DIR / "manifest.json", manifest)
    print(f"wrote {len(recordings) + 1} files to {FIXTURES_DIR}")


if __name__ == "__main__":
    main()
