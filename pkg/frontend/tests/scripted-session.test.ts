/** Acceptance: a scripted designer session against recorded service bytes.
 *
 * Load the initial document, drag the fold slider to three values, attempt a
 * case switch, and apply parallelism scales; after every step the rendered
 * vertex buffer must be byte-identical to the corresponding service
 * GeometryDocument and the badges must mirror the service report. */
import { describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import { DesignSession } from "../src/store.js";
import { buildScene } from "../src/viewer.js";
import type { GeometryDocument, NetSpecDocument } from "../src/types.js";
import { SequencePlayer, loadFixture, loadSpecFixture } from "./helpers.js";

function expectGeometryMatches(session: DesignSession, responseRaw: string) {
  // byte identity of the stored service document
  expect(session.geometry).not.toBeNull();
  expect(session.geometry!.raw).toBe(responseRaw);
  // the rendered buffer is exactly the flattened rows of that document
  const doc = JSON.parse(responseRaw) as GeometryDocument;
  const flat = doc.rows.flat(2);
  const buffer = session.geometry!.buffer;
  expect(buffer.length).toBe(flat.length);
  flat.forEach((value, k) => expect(buffer[k]).toBe(value));
  // the scene consumes the buffer without touching it
  const before = Array.from(buffer);
  const scene = buildScene(session.geometry!);
  expect(scene.points.length).toBe(doc.rows.length * doc.rows[0].length);
  expect(Array.from(buffer)).toEqual(before);
  // badges mirror the service report exactly
  const byName = Object.fromEntries(session.badges.map((b) => [b.name, b]));
  expect(byName.planarity.ok).toBe(doc.report!.planarity.pass);
  expect(byName.planarity.value).toBe(doc.report!.planarity.max_defect);
  expect(byName.isometry.ok).toBe(doc.report!.isometry.pass);
  expect(byName.isometry.value).toBe(doc.report!.isometry.max_deviation);
  expect(byName.collinearity.ok).toBe(doc.report!.collinearity.pass);
  expect(byName.all.ok).toBe(doc.report!.pass);
  expect(session.boundary).toBe(doc.boundary === true);
}

describe("scripted designer session", () => {
  it("keeps every rendered buffer byte-identical to the service geometry", async () => {
    const manifest = loadFixture("scripted-session.json");
    const player = new SequencePlayer(manifest.exchanges);
    const session = new DesignSession(new ServiceClient("", player.fetcher));
    const spec = loadSpecFixture("e1-spec.json") as NetSpecDocument;

    // 1. load: POST + refresh GET at the reference value
    expect(await session.load(spec)).toBe(true);
    expect(session.classification).toBe("Scaling_1a");
    expectGeometryMatches(session, player.exchange(1).response_raw);

    // 2-4. drag the fold slider to three values
    for (const [step, a] of [[2, 1.2], [3, 1.8], [4, 2.4]] as const) {
      expect(await session.setSlider(a)).toBe(true);
      expect(session.sliderValue).toBe(a);
      expectGeometryMatches(session, player.exchange(step).response_raw);
    }

    // 5. switching this dataset to the collineation case is rejected by the
    // service (equal initial bars are singular for that family); the error is
    // surfaced and the last valid geometry stays on screen
    expect(await session.switchCase("Collineation_2a")).toBe(false);
    expect(session.lastError).toBeTruthy();
    expectGeometryMatches(session, player.exchange(4).response_raw);

    // 6. apply parallelism scales: a derived net replaces the view
    expect(await session.applyParallel([1.2, 0.8, 1.5], [0.9, 1.3, 1.1])).toBe(true);
    expectGeometryMatches(session, player.exchange(7).response_raw);

    player.assertDone();
  });

  it("re-derives the dependent data when the case switch is admissible", async () => {
    const manifest = loadFixture("generic-switch.json");
    const player = new SequencePlayer(manifest.exchanges);
    const session = new DesignSession(new ServiceClient("", player.fetcher));
    const spec = loadSpecFixture("generic-spec.json") as NetSpecDocument;

    expect(await session.load(spec)).toBe(true);
    expect(session.classification).toBe("Scaling_1a");
    expectGeometryMatches(session, player.exchange(1).response_raw);

    expect(await session.switchCase("Collineation_2a")).toBe(true);
    expect(session.classification).toBe("Collineation_2a");
    expect(session.spec!.initial.v).toBeCloseTo(-0.8, 15);
    expectGeometryMatches(session, player.exchange(3).response_raw);

    player.assertDone();
  });
});
