"""Drive a scatter/gather session programmatically.

The same engine behind the HTTP service: scatter the collection into labeled
clusters, gather a couple of them, watch the vocabulary re-form around the
narrowed subset, then step back. To explore interactively instead, run
`scattermesh serve --corpus-dir <dir>` and open /ui.
"""

import tempfile
from pathlib import Path

from scattermesh.datasets import make_planted_corpus, write_planted_corpus
from scattermesh.service import ScatterGatherService


def show(state, label):
    print(f"\n== {label} (generation {state['generation']})")
    for cluster in state["clusters"]:
        terms = ", ".join(d["term"] for d in cluster["descriptors"][:5])
        print(f"  {cluster['id']}: {cluster['size']:3d} docs  [{terms}]")
    if state["metrics"]:
        print(f"  metrics: AMI={state['metrics']['ami']:.3f} PRT={state['metrics']['prt']:.3f}")


with tempfile.TemporaryDirectory() as tmp:
    root = Path(tmp)
    planted = make_planted_corpus(n_docs=200, n_topics=4, seed=7)
    write_planted_corpus(planted, root, name="planted")

    service = ScatterGatherService(root)
    entry = service.register_corpus("planted.jsonl")
    session = service.create_session(
        entry.corpus_id,
        {
            "subset": "title_abstract_body",
            "selector": {"kind": "vcgs", "r": 5, "p": 0.5},
            "lsa_n": 4,
            "algorithm": {"kind": "kmeans", "k": 4, "restarts": 3},
            "seed": 0,
        },
    )
    show(session.state, "initial scatter")

    # gather the two largest clusters and re-scatter just their documents
    chosen = sorted(session.state["clusters"], key=lambda c: -c["size"])[:2]
    service.gather(session.session_id, [c["id"] for c in chosen], k_override=2)
    show(session.state, f"gathered {chosen[0]['id']} + {chosen[1]['id']}")

    doc_id = session.state["clusters"][0]["samples"][0]["id"]
    doc = service.get_document(session.session_id, doc_id)
    print(f"\nopened {doc['id']}: class={doc['class']} cluster={doc['cluster']}")
    print(f"  title: {doc['title']}")

    service.back(session.session_id)
    show(session.state, "after back")
