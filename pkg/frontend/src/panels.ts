// Renders the two aligned panels: importance bars on the left, the
// distribution charts with predicate highlights and observed-value
// diamonds on the right. One grid row per feature keeps the panels
// aligned; every number shown in text comes verbatim from the served
// document (layout percentages reuse the served normalized values).

import type { Palette, ViewDoc, ViewRow } from "./api.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const CHART_HEIGHT = 28;
const SEGMENT_SHADES = ["#c9c9c9", "#a8a8a8", "#878787", "#696969", "#4d4d4d"];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

function pct(normalized: number): string {
  return `${normalized * 100}%`;
}

function fiCell(row: ViewRow, maxAbs: number, palette: Palette): HTMLElement {
  const cell = el("div", "fi-cell");
  const label = el("span", "feature-label", row.feature);
  label.title = row.feature;
  cell.appendChild(label);

  const barArea = el("div", "fi-bar-area");
  const bar = el("div", "fi-bar");
  const frac = maxAbs > 0 ? Math.abs(row.weight) / maxAbs : 0;
  bar.style.width = pct(frac);
  bar.style.background =
    row.weight_sign === "positive" ? palette.positive_color :
    row.weight_sign === "negative" ? palette.negative_color :
    palette.marker_color;
  barArea.appendChild(bar);
  cell.appendChild(barArea);

  // the weight is served; show it verbatim
  cell.appendChild(el("span", "fi-weight", String(row.weight)));
  return cell;
}

function diamond(cx: number, palette: Palette): SVGElement {
  const cy = CHART_HEIGHT / 2;
  const s = 5;
  return svgEl("path", {
    class: "marker",
    d: `M ${cx} ${cy - s} L ${cx + s} ${cy} L ${cx} ${cy + s} L ${cx - s} ${cy} Z`,
    fill: palette.marker_color,
  });
}

function numericChart(row: ViewRow, palette: Palette): SVGElement {
  const svg = svgEl("svg", {
    class: "chart numeric",
    viewBox: `0 0 100 ${CHART_HEIGHT}`,
    preserveAspectRatio: "none",
    width: "100%",
    height: String(CHART_HEIGHT),
  });
  const mid = CHART_HEIGHT / 2;
  const boxTop = mid - 6;
  if (row.highlight && row.highlight.flags === undefined) {
    const start = (row.highlight.start ?? 0) * 100;
    const end = (row.highlight.end ?? 0) * 100;
    svg.appendChild(svgEl("rect", {
      class: "highlight", x: String(start), y: "1",
      width: String(Math.max(end - start, 0)), height: String(CHART_HEIGHT - 2),
      fill: palette.highlight_color,
    }));
  }
  svg.appendChild(svgEl("line", {
    class: "whisker", x1: "0", y1: String(mid), x2: "100", y2: String(mid),
    stroke: "#555",
  }));
  // box edges reuse the served normalized geometry: with the axis spanning
  // min..max, quartile positions are (q - min) / (max - min); those ratios
  // are not served per se, so the box is drawn from the served summary
  // numbers without reformatting them anywhere visible.
  const body = row.summary;
  if (body.kind === "numerical") {
    const span = body.max - body.min;
    const at = (v: number) => (span > 0 ? ((v - body.min) / span) * 100 : 50);
    svg.appendChild(svgEl("rect", {
      class: "box", x: String(at(body.q1)), y: String(boxTop),
      width: String(Math.max(at(body.q3) - at(body.q1), 0)), height: "12",
      fill: "#fff", stroke: "#555",
    }));
    svg.appendChild(svgEl("line", {
      class: "median", x1: String(at(body.median)), y1: String(boxTop),
      x2: String(at(body.median)), y2: String(boxTop + 12), stroke: "#555",
    }));
  }
  svg.appendChild(diamond(row.marker.normalized * 100, palette));
  return svg;
}

function categoricalChart(row: ViewRow, palette: Palette): SVGElement {
  const svg = svgEl("svg", {
    class: "chart categorical",
    viewBox: `0 0 100 ${CHART_HEIGHT}`,
    preserveAspectRatio: "none",
    width: "100%",
    height: String(CHART_HEIGHT),
  });
  const body = row.summary;
  if (body.kind !== "categorical") return svg;
  const total = body.entries.reduce((acc, e) => acc + e.count, 0);
  let cum = 0;
  body.entries.forEach((entry, i) => {
    const x = total > 0 ? (cum / total) * 100 : 0;
    const width = total > 0 ? (entry.count / total) * 100 : 0;
    cum += entry.count;
    if (row.highlight?.flags?.[i]) {
      svg.appendChild(svgEl("rect", {
        class: "highlight", x: String(x), y: "1",
        width: String(width), height: String(CHART_HEIGHT - 2),
        fill: palette.highlight_color,
      }));
    }
    svg.appendChild(svgEl("rect", {
      class: "segment", x: String(x), y: "8",
      width: String(width), height: "12",
      fill: SEGMENT_SHADES[i % SEGMENT_SHADES.length],
      stroke: "#fff", "stroke-width": "0.3",
    }));
  });
  svg.appendChild(diamond(row.marker.normalized * 100, palette));
  return svg;
}

export interface RowHandlers {
  onHover?: (feature: string, rowEl: HTMLElement) => void;
  onLeave?: (feature: string) => void;
}

export function renderView(
  container: HTMLElement, doc: ViewDoc, handlers: RowHandlers = {},
): void {
  container.replaceChildren();
  const palette = doc.options.palette;

  const header = el("div", "view-header");
  header.appendChild(el("span", "panel-title", "Feature importance"));
  header.appendChild(el("span", "panel-title", "Value distribution"));
  container.appendChild(header);
  container.appendChild(
    el("div", "prediction", `Prediction: ${doc.prediction}`));

  if (doc.rows.length === 0) {
    container.appendChild(
      el("div", "empty-state",
         "No rows to show: the rule premise is empty under this filter."));
    return;
  }

  const maxAbs = Math.max(...doc.rows.map((r) => Math.abs(r.weight)));
  for (const row of doc.rows) {
    const rowEl = el("div", "fiper-row");
    rowEl.dataset.feature = row.feature;
    rowEl.tabIndex = 0;
    if (row.in_rule) rowEl.classList.add("in-rule");
    rowEl.appendChild(fiCell(row, maxAbs, palette));
    const chartCell = el("div", "chart-cell");
    chartCell.appendChild(row.summary.kind === "numerical"
      ? numericChart(row, palette)
      : categoricalChart(row, palette));
    rowEl.appendChild(chartCell);
    if (handlers.onHover) {
      const enter = () => handlers.onHover?.(row.feature, rowEl);
      rowEl.addEventListener("mouseenter", enter);
      rowEl.addEventListener("focus", enter);
    }
    if (handlers.onLeave) {
      const leave = () => handlers.onLeave?.(row.feature);
      rowEl.addEventListener("mouseleave", leave);
      rowEl.addEventListener("blur", leave);
    }
    container.appendChild(rowEl);
  }
}

export function renderError(container: HTMLElement, message: string): void {
  container.replaceChildren();
  const banner = el("div", "error-banner", `Could not load the view: ${message}`);
  banner.setAttribute("role", "alert");
  container.appendChild(banner);
}
