// Feature detail tooltip. Numerical rows list exactly min, max, median,
// Q1, Q3 plus the observed value; categorical rows show the observed
// label with its cardinality. Values are printed verbatim from the
// served document (String() only, no reformatting or arithmetic).

import type { ViewRow } from "./api.js";

function item(dl: HTMLElement, term: string, value: string): void {
  const dt = document.createElement("dt");
  dt.textContent = term;
  const dd = document.createElement("dd");
  dd.textContent = value;
  dl.appendChild(dt);
  dl.appendChild(dd);
}

export function tooltipContent(row: ViewRow): HTMLElement {
  const box = document.createElement("div");
  box.className = "tooltip-content";
  const title = document.createElement("div");
  title.className = "tooltip-title";
  title.textContent = row.feature;
  box.appendChild(title);

  const dl = document.createElement("dl");
  if (row.summary.kind === "numerical") {
    item(dl, "min", String(row.summary.min));
    item(dl, "max", String(row.summary.max));
    item(dl, "median", String(row.summary.median));
    item(dl, "Q1", String(row.summary.q1));
    item(dl, "Q3", String(row.summary.q3));
    item(dl, "value", String(row.observed));
  } else {
    const observed = String(row.observed);
    const entry = row.summary.entries.find((e) => e.label === observed);
    item(dl, "value", observed);
    item(dl, "count", entry ? String(entry.count) : "0");
  }
  box.appendChild(dl);
  return box;
}

export class TooltipController {
  private readonly element: HTMLElement;

  constructor(private readonly root: HTMLElement) {
    this.element = document.createElement("div");
    this.element.className = "tooltip";
    this.element.hidden = true;
  }

  show(row: ViewRow, anchor: HTMLElement): void {
    this.element.replaceChildren(tooltipContent(row));
    this.element.hidden = false;
    if (!this.element.isConnected) anchor.appendChild(this.element);
    else if (this.element.parentElement !== anchor) anchor.appendChild(this.element);
  }

  hide(): void {
    this.element.hidden = true;
    this.element.replaceChildren();
    this.element.remove();
  }

  get visible(): boolean {
    return !this.element.hidden;
  }
}
