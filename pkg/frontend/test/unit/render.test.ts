import { describe, expect, it } from "vitest";

import {
  clusterColor,
  renderBanner,
  renderCard,
  renderCards,
  renderMetrics,
  renderProjection,
} from "../../src/render.js";
import { toggleSelection, viewFromSession } from "../../src/state.js";
import type { ClusterCard, SessionState } from "../../src/types.js";

const CARD: ClusterCard = {
  id: "g1:c0",
  size: 42,
  descriptors: [
    { term: "alphavirina", weight: 3.2 },
    { term: "alphavirinb", weight: 2.1 },
  ],
  samples: [{ id: "doc-0001", title: "a title" }],
};

describe("renderCard", () => {
  it("shows descriptors verbatim, size, and sample titles", () => {
    const html = renderCard(CARD, 0, false);
    expect(html).toContain(">alphavirina</span>");
    expect(html).toContain(">alphavirinb</span>");
    expect(html).toContain("42 docs");
    expect(html).toContain("a title");
    expect(html).toContain('data-cluster-id="g1:c0"');
  });

  it("renders size-only cards when descriptors are empty", () => {
    const bare: ClusterCard = { ...CARD, descriptors: [], samples: [] };
    const html = renderCard(bare, 0, false);
    expect(html).toContain("42 docs");
    expect(html).not.toContain("descriptors");
  });

  it("marks selected cards", () => {
    expect(renderCard(CARD, 0, true)).toContain('class="card selected"');
    expect(renderCard(CARD, 0, false)).not.toContain("selected");
  });

  it("escapes markup in payload text", () => {
    const sneaky: ClusterCard = {
      ...CARD,
      descriptors: [{ term: "<script>", weight: 1 }],
    };
    const html = renderCard(sneaky, 0, false);
    expect(html).toContain("&lt;script&gt;");
    expect(html).not.toContain("<script>");
  });
});

describe("renderCards", () => {
  it("renders one card per cluster with distinct colors", () => {
    const state: SessionState = {
      session_id: "s",
      generation: 1,
      clusters: [0, 1, 2, 3].map((i) => ({ ...CARD, id: `g1:c${i}` })),
      metrics: null,
      history_depth: 0,
      projection: [],
    };
    let view = viewFromSession(state);
    view = toggleSelection(view, "g1:c2");
    const html = renderCards(view);
    expect(html.match(/<article/g)).toHaveLength(4);
    const colors = new Set([0, 1, 2, 3].map(clusterColor));
    expect(colors.size).toBe(4);
    for (const color of colors) {
      expect(html).toContain(color);
    }
  });
});

describe("renderMetrics", () => {
  it("is empty when metrics are null", () => {
    expect(renderMetrics(null)).toBe("");
  });

  it("formats the four headline numbers", () => {
    const html = renderMetrics({ sc: 0.5, prt: 0.9, ami: 0.8123, homogeneity: [1], k: 4 });
    expect(html).toContain("SC 0.500");
    expect(html).toContain("PRT 0.900");
    expect(html).toContain("AMI 0.812");
    expect(html).toContain("k 4");
  });

  it("dashes a missing silhouette", () => {
    expect(renderMetrics({ sc: null, prt: 1, ami: 1, homogeneity: [], k: 1 })).toContain("SC -");
  });
});

describe("renderProjection", () => {
  it("returns nothing without points", () => {
    expect(renderProjection([])).toBe("");
  });

  it("draws one circle per point colored by cluster", () => {
    const svg = renderProjection([
      { id: "a", x: 0, y: 0, cluster: 0 },
      { id: "b", x: 1, y: 1, cluster: 1 },
    ]);
    expect(svg.match(/<circle/g)).toHaveLength(2);
    expect(svg).toContain(clusterColor(0));
    expect(svg).toContain(clusterColor(1));
  });
});

describe("renderBanner", () => {
  it("hides and shows", () => {
    expect(renderBanner(null)).toBe("");
    expect(renderBanner("stale generation")).toContain("stale generation");
  });
});
