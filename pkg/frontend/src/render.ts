// HTML/SVG string builders. Kept DOM-free so they are testable anywhere;
// main.ts assigns the results to innerHTML and wires events by delegation.

import type { ClusterCard, DocumentRecord, Metrics, ProjectionPoint } from "./types.js";
import type { ViewState } from "./state.js";

export const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
  "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
  "#98df8a", "#ff9896", "#c5b0d5", "#c49c94",
];

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function clusterColor(index: number): string {
  return PALETTE[index % PALETTE.length];
}

export function renderCard(card: ClusterCard, index: number, selected: boolean): string {
  const descriptors = card.descriptors.length
    ? `<p class="descriptors">${card.descriptors
        .map((d) => `<span class="term" title="${d.weight}">${escapeHtml(d.term)}</span>`)
        .join(", ")}</p>`
    : "";
  const samples = card.samples
    .map(
      (s) =>
        `<li><a href="#" class="doc-link" data-doc-id="${escapeHtml(s.id)}">${escapeHtml(
          s.title,
        )}</a></li>`,
    )
    .join("");
  return [
    `<article class="card${selected ? " selected" : ""}" data-cluster-id="${escapeHtml(card.id)}">`,
    `<header><span class="swatch" style="background:${clusterColor(index)}"></span>`,
    `<h3>${escapeHtml(card.id)}</h3><span class="size">${card.size} docs</span></header>`,
    descriptors,
    `<ul class="samples">${samples}</ul>`,
    `</article>`,
  ].join("");
}

export function renderCards(view: ViewState): string {
  return view.cards.map((c, i) => renderCard(c, i, view.selected.has(c.id))).join("\n");
}

export function renderMetrics(metrics: Metrics | null): string {
  if (metrics === null) {
    return "";
  }
  const sc = metrics.sc === null ? "-" : metrics.sc.toFixed(3);
  return (
    `<span>SC ${sc}</span><span>PRT ${metrics.prt.toFixed(3)}</span>` +
    `<span>AMI ${metrics.ami.toFixed(3)}</span><span>k ${metrics.k}</span>`
  );
}

export function renderBreadcrumbs(view: ViewState): string {
  const steps = view.breadcrumbs
    .map((b) => `<span class="crumb">${escapeHtml(b.label)}</span>`)
    .join(" &rsaquo; ");
  const here = `<span class="crumb here">generation ${view.generation}</span>`;
  return steps ? `${steps} &rsaquo; ${here}` : here;
}

export function renderProjection(points: ProjectionPoint[], size = 320): string {
  if (!points.length) {
    return "";
  }
  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  const minX = Math.min(...xs);
  const minY = Math.min(...ys);
  const spanX = Math.max(...xs) - minX || 1;
  const spanY = Math.max(...ys) - minY || 1;
  const margin = 12;
  const inner = size - 2 * margin;
  const circles = points
    .map((p) => {
      const cx = margin + ((p.x - minX) / spanX) * inner;
      const cy = size - margin - ((p.y - minY) / spanY) * inner;
      return `<circle cx="${cx.toFixed(1)}" cy="${cy.toFixed(1)}" r="3" fill="${clusterColor(
        p.cluster,
      )}" fill-opacity="0.7"><title>${escapeHtml(p.id)}</title></circle>`;
    })
    .join("");
  return `<svg viewBox="0 0 ${size} ${size}" width="${size}" height="${size}">${circles}</svg>`;
}

export function renderDocument(doc: DocumentRecord): string {
  const rows = [
    `<h2>${escapeHtml(doc.title)}</h2>`,
    `<p class="meta">id ${escapeHtml(doc.id)}` +
      (doc.class ? ` &middot; class ${escapeHtml(doc.class)}` : "") +
      (doc.cluster ? ` &middot; cluster ${escapeHtml(doc.cluster)}` : "") +
      `</p>`,
  ];
  if (doc.abstract) {
    rows.push(`<h4>Abstract</h4><p>${escapeHtml(doc.abstract)}</p>`);
  }
  if (doc.body) {
    rows.push(`<h4>Body</h4><p>${escapeHtml(doc.body)}</p>`);
  }
  return rows.join("");
}

export function renderBanner(message: string | null): string {
  return message === null ? "" : `<div class="banner">${escapeHtml(message)}</div>`;
}
