import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { expect } from "vitest";

import type { Fetcher } from "../src/api.js";

const HERE = dirname(fileURLToPath(import.meta.url));

export interface Exchange {
  method: string;
  url: string;
  request_body: unknown;
  status: number;
  response_raw: string;
}

export function loadFixture(name: string): { exchanges: Exchange[] } {
  return JSON.parse(readFileSync(join(HERE, "fixtures", name), "utf-8"));
}

export function loadSpecFixture(name: string): unknown {
  return JSON.parse(readFileSync(join(HERE, "fixtures", name), "utf-8"));
}

/** Serves recorded exchanges strictly in order, asserting that the client
 * issues exactly the recorded requests. */
export class SequencePlayer {
  private cursor = 0;

  constructor(private readonly exchanges: Exchange[]) {}

  fetcher: Fetcher = async (url, init) => {
    const expected = this.exchanges[this.cursor];
    expect(expected, `unexpected extra request ${url}`).toBeDefined();
    this.cursor += 1;
    expect(init?.method ?? "GET").toBe(expected.method);
    expect(url).toBe(expected.url);
    if (expected.request_body !== null) {
      expect(JSON.parse(init?.body ?? "null")).toEqual(expected.request_body);
    }
    return { status: expected.status, text: expected.response_raw };
  };

  exchange(index: number): Exchange {
    return this.exchanges[index];
  }

  assertDone(): void {
    expect(this.cursor).toBe(this.exchanges.length);
  }
}

/** Minimal canned service for store-logic tests that need no real bytes. */
export function cannedGeometry(a: number, value: number): string {
  const doc = {
    a,
    rows: [
      [[value, 0, 0], [value, 1, 0]],
      [[value, 0, 1], [value, 1, 1]],
    ],
    tips: [[0, 0, 0], [0, 0, 1]],
    report: {
      planarity: { max_defect: 0, pass: true },
      isometry: { max_deviation: 0, pass: true },
      collinearity: { max_defect: 0, pass: true },
      pass: true,
      offenders: {},
    },
    boundary: false,
  };
  return JSON.stringify(doc);
}
