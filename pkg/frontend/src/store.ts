/** Session state: the design document, the current service geometry (kept as
 * raw bytes plus a typed vertex buffer), validation badges, and undo history.
 *
 * The store never computes vertices itself; every buffer comes verbatim from
 * a service GeometryDocument (single source of truth), and stale responses
 * are dropped by a sequence check (latest edit wins). */

import { ServiceClient } from "./api.js";
import type {
  CreateResponse,
  ErrorResponse,
  GeometryDocument,
  NetSpecDocument,
  ParallelResponse,
  ProfileEntryDoc,
  ReportDocument,
} from "./types.js";

export interface GeometryView {
  /** exact bytes of the service response */
  raw: string;
  doc: GeometryDocument;
  /** flattened row-major xyz vertex buffer, sourced from doc.rows only */
  buffer: Float64Array;
  rows: number;
  cols: number;
}

export function geometryView(raw: string): GeometryView {
  const doc = JSON.parse(raw) as GeometryDocument;
  const rows = doc.rows.length;
  const cols = rows > 0 ? doc.rows[0].length : 0;
  const buffer = new Float64Array(rows * cols * 3);
  let k = 0;
  for (const row of doc.rows) {
    for (const point of row) {
      buffer[k++] = point[0];
      buffer[k++] = point[1];
      buffer[k++] = point[2];
    }
  }
  return { raw, doc, buffer, rows, cols };
}

export interface Badge {
  name: string;
  ok: boolean;
  value: number;
}

export function badgesFromReport(report: ReportDocument | undefined): Badge[] {
  if (!report) {
    return [];
  }
  return [
    { name: "planarity", ok: report.planarity.pass, value: report.planarity.max_defect },
    { name: "isometry", ok: report.isometry.pass, value: report.isometry.max_deviation },
    {
      name: "collinearity",
      ok: report.collinearity.pass,
      value: report.collinearity.max_defect,
    },
    { name: "all", ok: report.pass, value: 0 },
  ];
}

const CASE_SIGN: Record<string, number> = {
  Scaling_1a: +1,
  Collineation_2b: +1,
  Scaling_1b: -1,
  Collineation_2a: -1,
};

/** Swap the case label of one strip triple, adjusting the initial ratio's
 * sign to the intercept proportion when the first triple changes.  This is a
 * form-level normalization of the document; the service remains the oracle
 * for whether the data is actually flexible. */
export function normalizeInitialForCase(spec: NetSpecDocument, label: string,
                                        strip = 0): NetSpecDocument {
  const cases = spec.cases.slice();
  cases[strip] = label;
  const next: NetSpecDocument = { ...spec, cases, initial: { ...spec.initial } };
  const sign = CASE_SIGN[label];
  if (strip === 0 && sign !== undefined) {
    next.initial.v = (sign * next.initial.u) / next.initial.t;
  }
  return next;
}

export class DesignSession {
  spec: NetSpecDocument | null = null;
  netId: string | null = null;
  masterId: string | null = null;
  classification = "";
  usableRange: [number, number] = [0, 0];
  planarRange: [number, number] = [0, 0];
  sliderValue = 0;
  geometry: GeometryView | null = null;
  badges: Badge[] = [];
  lastError: string | null = null;
  boundary = false;
  private history: NetSpecDocument[] = [];
  private sequence = 0;

  constructor(private readonly client: ServiceClient) {}

  /** Clamp a requested slider value so out-of-range requests are never sent. */
  clamp(a: number): number {
    const [lo, hi] = this.usableRange;
    return Math.min(Math.max(a, lo), hi);
  }

  private adoptGeometry(raw: string): void {
    const view = geometryView(raw);
    this.geometry = view;
    this.badges = badgesFromReport(view.doc.report);
    this.boundary = view.doc.boundary === true;
  }

  private nextTicket(): number {
    this.sequence += 1;
    return this.sequence;
  }

  private stale(ticket: number): boolean {
    return ticket !== this.sequence;
  }

  async load(spec: NetSpecDocument): Promise<boolean> {
    const ticket = this.nextTicket();
    const reply = await this.client.createNet(spec);
    if (this.stale(ticket)) {
      return false;
    }
    if (reply.status !== 201) {
      this.lastError = (reply.body as ErrorResponse).detail;
      return false;
    }
    const body = reply.body as CreateResponse;
    if (this.spec) {
      this.history.push(this.spec);
    }
    this.spec = spec;
    this.netId = body.id;
    this.masterId = body.id;
    this.classification = body.classification;
    this.usableRange = body.usable_range;
    this.planarRange = body.range;
    this.sliderValue = spec.a_ref;
    this.lastError = null;
    return this.refreshGeometry(this.sliderValue);
  }

  private async refreshGeometry(a: number): Promise<boolean> {
    if (!this.netId) {
      return false;
    }
    const ticket = this.nextTicket();
    const reply = await this.client.getState(this.netId, a);
    if (this.stale(ticket)) {
      return false;
    }
    if (reply.status !== 200) {
      this.lastError = (reply.body as ErrorResponse).detail;
      return false;
    }
    this.adoptGeometry(reply.raw);
    return true;
  }

  /** Move the fold slider; the value is clamped into the usable range. */
  async setSlider(a: number): Promise<boolean> {
    const value = this.clamp(a);
    this.sliderValue = value;
    return this.refreshGeometry(value);
  }

  /** Re-classify under a different case label for one strip triple. */
  async switchCase(label: string, strip = 0): Promise<boolean> {
    if (!this.spec) {
      return false;
    }
    return this.load(normalizeInitialForCase(this.spec, label, strip));
  }

  /** Replace the profile with edited point-form entries and re-post. */
  async editProfile(entries: ProfileEntryDoc[]): Promise<boolean> {
    if (!this.spec) {
      return false;
    }
    return this.load({ ...this.spec, profile: entries });
  }

  /** Derive a general net from the current master via the parallelism scales. */
  async applyParallel(rowScales: number[], colScales: number[]): Promise<boolean> {
    if (!this.masterId) {
      return false;
    }
    const ticket = this.nextTicket();
    const reply = await this.client.makeParallel(this.masterId, rowScales, colScales);
    if (this.stale(ticket)) {
      return false;
    }
    if (reply.status !== 201) {
      this.lastError = (reply.body as ErrorResponse).detail;
      return false;
    }
    const body = reply.body as ParallelResponse;
    this.netId = body.id;
    this.usableRange = body.usable_range;
    this.lastError = null;
    this.sliderValue = this.clamp(this.sliderValue);
    return this.refreshGeometry(this.sliderValue);
  }

  /** Restore the previous document (one undo step). */
  async undo(): Promise<boolean> {
    const previous = this.history.pop();
    if (!previous) {
      return false;
    }
    const ok = await this.load(previous);
    if (ok) {
      this.history.pop(); // drop the re-entry load() just pushed
    }
    return ok;
  }
}

/** Debounce an async action; the trailing call wins. */
export function debounced<A extends unknown[]>(
  action: (...args: A) => void,
  waitMs: number,
  schedule: (fn: () => void, ms: number) => ReturnType<typeof setTimeout> = setTimeout,
  cancel: (handle: ReturnType<typeof setTimeout>) => void = clearTimeout,
): (...args: A) => void {
  let handle: ReturnType<typeof setTimeout> | null = null;
  return (...args: A) => {
    if (handle !== null) {
      cancel(handle);
    }
    handle = schedule(() => {
      handle = null;
      action(...args);
    }, waitMs);
  };
}

export const EDIT_DEBOUNCE_MS = 150;
