import { describe, expect, it, vi } from "vitest";

import { ServiceClient, type Fetcher } from "../src/api.js";
import {
  DesignSession,
  badgesFromReport,
  debounced,
  geometryView,
  normalizeInitialForCase,
} from "../src/store.js";
import type { NetSpecDocument } from "../src/types.js";
import { cannedGeometry } from "./helpers.js";

const SPEC: NetSpecDocument = {
  a_ref: 2,
  cases: ["Scaling_1a"],
  initial: { s: 1.5, t: 2, u: 1.6, v: 0.8 },
  profile: [{ s: 1.8, t: 2.2, phi: 0.3 }],
};

function cannedCreate(id: string): string {
  return JSON.stringify({
    id,
    classification: "Scaling_1a",
    branch: "+",
    case3_compatible: false,
    range: [0, 3],
    usable_range: [0.5, 2.5],
    geometry: JSON.parse(cannedGeometry(2, 0)),
  });
}

describe("geometryView", () => {
  it("keeps raw bytes and flattens rows into the buffer", () => {
    const raw = cannedGeometry(1.5, 7);
    const view = geometryView(raw);
    expect(view.raw).toBe(raw);
    expect(view.rows).toBe(2);
    expect(view.cols).toBe(2);
    expect(Array.from(view.buffer)).toEqual([7, 0, 0, 7, 1, 0, 7, 0, 1, 7, 1, 1]);
  });
});

describe("badges", () => {
  it("mirrors the report fields", () => {
    const doc = JSON.parse(cannedGeometry(1, 0));
    const badges = badgesFromReport(doc.report);
    expect(badges.map((b) => [b.name, b.ok])).toEqual([
      ["planarity", true], ["isometry", true], ["collinearity", true], ["all", true],
    ]);
  });

  it("is empty without a report", () => {
    expect(badgesFromReport(undefined)).toEqual([]);
  });
});

describe("normalizeInitialForCase", () => {
  it("pins the ratio sign to the case proportion", () => {
    const flipped = normalizeInitialForCase(SPEC, "Collineation_2a");
    expect(flipped.cases).toEqual(["Collineation_2a"]);
    expect(flipped.initial.v).toBeCloseTo(-0.8, 15);
    expect(SPEC.initial.v).toBe(0.8); // source untouched
  });

  it("leaves the ratio alone for the perspectivity", () => {
    const kept = normalizeInitialForCase(SPEC, "Perspectivity_3");
    expect(kept.initial.v).toBe(0.8);
  });

  it("touches only the addressed strip of a chain", () => {
    const chained = { ...SPEC, cases: ["Scaling_1a", "Scaling_1a"] };
    const next = normalizeInitialForCase(chained, "Collineation_2a", 1);
    expect(next.cases).toEqual(["Scaling_1a", "Collineation_2a"]);
    expect(next.initial.v).toBe(0.8); // first-triple proportion untouched
  });
});

describe("slider clamping", () => {
  it("never sends an out-of-range request", async () => {
    const urls: string[] = [];
    const fetcher: Fetcher = async (url, init) => {
      urls.push(url);
      if (init?.method === "POST") {
        return { status: 201, text: cannedCreate("n1") };
      }
      return { status: 200, text: cannedGeometry(2, 0) };
    };
    const session = new DesignSession(new ServiceClient("", fetcher));
    await session.load(SPEC);
    await session.setSlider(99);
    expect(session.sliderValue).toBe(2.5);
    expect(urls.at(-1)).toBe("/api/nets/n1?a=2.5");
    await session.setSlider(-10);
    expect(urls.at(-1)).toBe("/api/nets/n1?a=0.5");
  });
});

describe("latest wins", () => {
  it("drops a stale slider response that resolves late", async () => {
    const pending: Array<(r: { status: number; text: string }) => void> = [];
    const fetcher: Fetcher = async (url, init) => {
      if (init?.method === "POST") {
        return { status: 201, text: cannedCreate("n1") };
      }
      if (url.endsWith("a=2")) {
        return { status: 200, text: cannedGeometry(2, 0) };
      }
      return new Promise((resolve) => pending.push(resolve));
    };
    const session = new DesignSession(new ServiceClient("", fetcher));
    await session.load(SPEC);
    const first = session.setSlider(1.0);
    const second = session.setSlider(1.5);
    // resolve the second request first, then the stale first one
    pending[1]({ status: 200, text: cannedGeometry(1.5, 15) });
    expect(await second).toBe(true);
    pending[0]({ status: 200, text: cannedGeometry(1.0, 10) });
    expect(await first).toBe(false);
    expect(session.geometry!.doc.a).toBe(1.5);
    expect(session.geometry!.buffer[0]).toBe(15);
  });
});

describe("undo", () => {
  it("restores the previous document", async () => {
    const posted: NetSpecDocument[] = [];
    const fetcher: Fetcher = async (url, init) => {
      if (init?.method === "POST") {
        posted.push(JSON.parse(init.body!));
        return { status: 201, text: cannedCreate(`n${posted.length}`) };
      }
      return { status: 200, text: cannedGeometry(2, posted.length) };
    };
    const session = new DesignSession(new ServiceClient("", fetcher));
    const specB = { ...SPEC, a_ref: 2.2 };
    await session.load(SPEC);
    await session.load(specB);
    expect(session.spec!.a_ref).toBe(2.2);
    expect(await session.undo()).toBe(true);
    expect(session.spec!.a_ref).toBe(2);
    expect(await session.undo()).toBe(false);
  });
});

describe("debounced", () => {
  it("coalesces calls within the window, trailing call wins", () => {
    vi.useFakeTimers();
    const seen: number[] = [];
    const fire = debounced((x: number) => seen.push(x), 150);
    fire(1);
    vi.advanceTimersByTime(100);
    fire(2);
    vi.advanceTimersByTime(100);
    expect(seen).toEqual([]);
    vi.advanceTimersByTime(60);
    expect(seen).toEqual([2]);
    vi.useRealTimers();
  });
});
