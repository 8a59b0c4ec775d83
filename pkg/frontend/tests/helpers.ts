// Shared test scaffolding: a fetch stub serving the captured API
// documents, with call recording so tests can assert which requests the
// UI made (and that it never mutates anything).

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture(name: string): unknown {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8"));
}

export function fixtureText(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf-8");
}

export interface RecordedCall {
  url: string;
  method: string;
}

export interface FetchStub {
  fetch: typeof fetch;
  calls: RecordedCall[];
}

type Route = { body: string; status?: number; contentType?: string };

export function makeFetchStub(routes: Record<string, Route>): FetchStub {
  const calls: RecordedCall[] = [];
  const stub = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    calls.push({ url, method: init?.method ?? "GET" });
    const route = routes[url];
    if (!route) {
      return new Response(
        JSON.stringify({ code: "not_found", message: `no route ${url}`, path: url }),
        { status: 404, headers: { "content-type": "application/json" } });
    }
    return new Response(route.body, {
      status: route.status ?? 200,
      headers: { "content-type": route.contentType ?? "application/json" },
    });
  }) as typeof fetch;
  return { fetch: stub, calls };
}

export function defaultRoutes(): Record<string, Route> {
  return {
    "/api/explanations": { body: JSON.stringify(fixture("explanations.json")) },
    "/api/explanations/gc-001/view?filter=all": {
      body: JSON.stringify(fixture("view_all.json")),
    },
    "/api/explanations/gc-001/view?filter=rule": {
      body: JSON.stringify(fixture("view_rule.json")),
    },
    "/api/explanations/gc-002/view?filter=all": {
      body: JSON.stringify(fixture("view_all.json")),
    },
    "/api/explanations/gc-002/view?filter=rule": {
      body: JSON.stringify(fixture("view_empty_rule.json")),
    },
    "/api/explanations/gc-001/modality/text": {
      body: fixtureText("modality_text.txt"), contentType: "text/plain",
    },
    "/api/explanations/gc-001/modality/blocks": {
      body: JSON.stringify(fixture("blocks.json")),
    },
  };
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
