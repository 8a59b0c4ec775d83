// @vitest-environment jsdom

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import type { ViewDoc } from "../src/api.js";
import { App } from "../src/main.js";
import { RequestToken } from "../src/state.js";
import { fixture } from "./helpers.js";

const VIEW_ALL = fixture("view_all.json") as ViewDoc;
const VIEW_RULE = fixture("view_rule.json") as ViewDoc;

describe("request token", () => {
  it("only the newest token is current", () => {
    const token = new RequestToken();
    const a = token.next();
    const b = token.next();
    expect(token.isCurrent(a)).toBe(false);
    expect(token.isCurrent(b)).toBe(true);
  });
});

describe("stale responses", () => {
  it("a slow earlier response never overwrites a newer view", async () => {
    document.body.innerHTML = '<div id="app"></div>';
    const resolvers = new Map<string, (body: string) => void>();
    const stub = (async (input: RequestInfo | URL) => {
      const url = String(input);
      return new Promise<Response>((resolve) => {
        resolvers.set(url, (body) => resolve(new Response(body, {
          status: 200, headers: { "content-type": "application/json" },
        })));
      });
    }) as typeof fetch;

    const app = new App(document.getElementById("app")!, new ApiClient(stub));
    const slow = app.showView("gc-001", "all");
    const fast = app.showView("gc-001", "rule");

    // the newer request resolves first...
    resolvers.get("/api/explanations/gc-001/view?filter=rule")!(
      JSON.stringify(VIEW_RULE));
    await fast;
    expect(document.querySelectorAll(".fiper-row").length)
      .toBe(VIEW_RULE.rows.length);

    // ...then the stale one arrives and must be discarded
    resolvers.get("/api/explanations/gc-001/view?filter=all")!(
      JSON.stringify(VIEW_ALL));
    await slow;
    expect(document.querySelectorAll(".fiper-row").length)
      .toBe(VIEW_RULE.rows.length);
    expect(app.state.filter).toBe("rule");
  });
});
