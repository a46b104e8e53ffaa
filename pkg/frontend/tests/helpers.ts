import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

/** Load a recorded service response from tests/fixtures. */
export function fixture<T>(name: string): T {
  const path = fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));
  return JSON.parse(readFileSync(path, "utf-8")) as T;
}

type Handler = (url: string, init?: RequestInit) => { status: number; body: unknown };

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

/** A fetch stub that dispatches on "METHOD path" and records every call. */
export function stubFetch(routes: Record<string, unknown | Handler>): {
  fetchImpl: typeof fetch;
  calls: RecordedCall[];
} {
  const calls: RecordedCall[] = [];
  const fetchImpl = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    calls.push({
      url,
      method,
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    });
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const key = `${method} ${path}`;
    const route = routes[key] ?? routes[`${method} ${path.split("?")[0]}`];
    if (route === undefined) {
      return new Response(JSON.stringify({ detail: `no route ${key}` }), {
        status: 404,
        headers: { "Content-Type": "application/json" },
      });
    }
    const result =
      typeof route === "function" ? (route as Handler)(url, init) : { status: 200, body: route };
    return new Response(JSON.stringify(result.body), {
      status: result.status,
      headers: { "Content-Type": "application/json" },
    });
  }) as typeof fetch;
  return { fetchImpl, calls };
}
