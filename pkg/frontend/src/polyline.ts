/** Profile polyline editor model.
 *
 * The handles shown to the designer are the first linkage row of the service
 * geometry, unfolded into the meridian plane as (d, z) pairs with their
 * meridian angles.  Edits produce point-form profile entries for the spec
 * document; the service re-derives all dependent bar data. */

import type { GeometryDocument, ProfileEntryDoc } from "./types.js";

export interface ProfileHandle {
  d: number;
  z: number;
  phi: number;
  /** index 0 is the initial column and cannot be dragged */
  fixed: boolean;
}

export interface EditResult {
  handles: ProfileHandle[];
  error: string | null;
}

/** Unfold the first linkage row of a geometry document into editor handles. */
export function handlesFromGeometry(doc: GeometryDocument,
                                    phis: number[]): ProfileHandle[] {
  const row = doc.rows[1];
  return row.map((point, index) => ({
    d: Math.hypot(point[0], point[1]),
    z: point[2],
    phi: phis[index] ?? Math.atan2(point[1], point[0]),
    fixed: index === 0,
  }));
}

export function dragPoint(handles: ProfileHandle[], index: number,
                          d: number, z: number): EditResult {
  if (index < 0 || index >= handles.length) {
    return { handles, error: `no profile point at index ${index}` };
  }
  if (handles[index].fixed) {
    return { handles, error: "the initial column is fixed" };
  }
  if (d <= 0) {
    return { handles, error: "distance to the axis must stay positive" };
  }
  const next = handles.map((h, k) => (k === index ? { ...h, d, z } : h));
  return { handles: next, error: null };
}

export function dragPhi(handles: ProfileHandle[], index: number,
                        phi: number): EditResult {
  if (index < 0 || index >= handles.length) {
    return { handles, error: `no profile point at index ${index}` };
  }
  if (handles[index].fixed) {
    return { handles, error: "the initial column is fixed" };
  }
  const before = index > 0 ? handles[index - 1].phi : -Infinity;
  const after = index + 1 < handles.length ? handles[index + 1].phi : Infinity;
  if (phi <= before || phi >= after) {
    return { handles, error: "meridian angles must stay strictly increasing" };
  }
  const next = handles.map((h, k) => (k === index ? { ...h, phi } : h));
  return { handles: next, error: null };
}

/** Point-form profile entries for the spec document (initial column omitted). */
export function toProfileEntries(handles: ProfileHandle[]): ProfileEntryDoc[] {
  return handles.slice(1).map((h) => ({ d: h.d, z: h.z, phi: h.phi }));
}
