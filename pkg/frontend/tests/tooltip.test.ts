// @vitest-environment jsdom

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import type { NumericalSummary, ViewDoc, ViewRow } from "../src/api.js";
import { App } from "../src/main.js";
import { tooltipContent } from "../src/tooltip.js";
import { defaultRoutes, fixture, flush, makeFetchStub } from "./helpers.js";

const VIEW_ALL = fixture("view_all.json") as ViewDoc;

function mount(): HTMLElement {
  document.body.innerHTML = '<div id="app"></div>';
  return document.getElementById("app") as HTMLElement;
}

async function makeApp() {
  const stub = makeFetchStub(defaultRoutes());
  const app = new App(mount(), new ApiClient(stub.fetch));
  await app.init();
  await flush();
  return { app, stub };
}

function rowFor(feature: string): ViewRow {
  const row = VIEW_ALL.rows.find((r) => r.feature === feature);
  if (!row) throw new Error(`no fixture row for ${feature}`);
  return row;
}

function hover(feature: string): HTMLElement {
  const el = document.querySelector<HTMLElement>(`[data-feature="${feature}"]`);
  if (!el) throw new Error(`no rendered row for ${feature}`);
  el.dispatchEvent(new Event("mouseenter"));
  return el;
}

describe("tooltip content", () => {
  it("numerical rows show exactly min, max, median, Q1, Q3 and the value",
     () => {
    const row = rowFor("age");
    const content = tooltipContent(row);
    const terms = [...content.querySelectorAll("dt")].map((n) => n.textContent);
    expect(terms).toEqual(["min", "max", "median", "Q1", "Q3", "value"]);
    const values = [...content.querySelectorAll("dd")].map((n) => n.textContent);
    const summary = row.summary as NumericalSummary;
    expect(values).toEqual([
      String(summary.min), String(summary.max), String(summary.median),
      String(summary.q1), String(summary.q3), String(row.observed),
    ]);
  });

  it("categorical rows show the observed label and its cardinality", () => {
    const row = rowFor("purpose");
    if (row.summary.kind !== "categorical") throw new Error("fixture drift");
    const content = tooltipContent(row);
    const terms = [...content.querySelectorAll("dt")].map((n) => n.textContent);
    expect(terms).toEqual(["value", "count"]);
    const values = [...content.querySelectorAll("dd")].map((n) => n.textContent);
    const entry = row.summary.entries.find((e) => e.label === row.observed)!;
    expect(values).toEqual([String(row.observed), String(entry.count)]);
  });

  it("every displayed value is one the API served verbatim", () => {
    const servedTexts = new Set<string>();
    const collect = (value: unknown) => {
      if (typeof value === "number" || typeof value === "string") {
        servedTexts.add(String(value));
      } else if (Array.isArray(value)) value.forEach(collect);
      else if (value && typeof value === "object") {
        Object.values(value).forEach(collect);
      }
    };
    collect(VIEW_ALL);
    for (const row of VIEW_ALL.rows) {
      for (const dd of tooltipContent(row).querySelectorAll("dd")) {
        expect(servedTexts.has(dd.textContent ?? "")).toBe(true);
      }
    }
  });
});

describe("tooltip interaction", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("appears on hover anchored to the row", async () => {
    await makeApp();
    const rowEl = hover("age");
    const tooltip = rowEl.querySelector(".tooltip");
    expect(tooltip).not.toBeNull();
    expect((tooltip as HTMLElement).hidden).toBe(false);
    expect(tooltip!.textContent).toContain("median");
  });

  it("disappears on mouse-out", async () => {
    await makeApp();
    const rowEl = hover("age");
    rowEl.dispatchEvent(new Event("mouseleave"));
    expect(document.querySelector(".tooltip")).toBeNull();
  });

  it("keyboard focus shows the same panel", async () => {
    const { app } = await makeApp();
    const rowEl = document.querySelector<HTMLElement>('[data-feature="age"]')!;
    rowEl.dispatchEvent(new Event("focus"));
    expect(rowEl.querySelector(".tooltip")).not.toBeNull();
    expect(app.state.hovered).toBe("age");
    rowEl.dispatchEvent(new Event("blur"));
    expect(app.state.hovered).toBeNull();
  });

  it("tracks only rendered rows in state", async () => {
    const { app } = await makeApp();
    hover("age");
    expect(app.state.hovered).toBe("age");
    app.showTooltip("not_a_feature", document.body);
    expect(app.state.hovered).toBe("age"); // unknown feature ignored
  });
});
