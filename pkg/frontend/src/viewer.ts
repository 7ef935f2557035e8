/** Render model for the 3D view and the unfolded linkage pane.
 *
 * These are pure projections of the service geometry buffer into draw lists;
 * no vertex positions are invented here. */

import type { GeometryView } from "./store.js";

export interface Camera {
  yaw: number;
  pitch: number;
  distance: number;
  focusZ: number;
  viewWidth: number;
  viewHeight: number;
}

export const DEFAULT_CAMERA: Camera = {
  yaw: 0.7,
  pitch: 0.5,
  distance: 12,
  focusZ: 1,
  viewWidth: 640,
  viewHeight: 480,
};

export interface ProjectedPoint {
  x: number;
  y: number;
  depth: number;
}

export function project(camera: Camera, x: number, y: number, z: number):
    ProjectedPoint {
  const cy = Math.cos(camera.yaw);
  const sy = Math.sin(camera.yaw);
  const cp = Math.cos(camera.pitch);
  const sp = Math.sin(camera.pitch);
  const zc = z - camera.focusZ;
  const rx = cy * x + sy * y;
  const ry = -sy * x + cy * y;
  const rz = cp * zc - sp * ry;
  const depth = camera.distance + sp * zc + cp * ry;
  const scale = (0.5 * Math.min(camera.viewWidth, camera.viewHeight))
      / Math.max(depth, 1e-9);
  return {
    x: camera.viewWidth / 2 + scale * rx,
    y: camera.viewHeight / 2 - scale * rz,
    depth,
  };
}

export interface QuadFace {
  strip: number;
  corners: [number, number, number, number]; // vertex indices into the buffer
  color: string;
}

export interface Scene {
  points: ProjectedPoint[];
  quads: QuadFace[];
  tips: ProjectedPoint[];
}

export const STRIP_COLORS = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                             "#76b7b2", "#edc948"];

export function vertexIndex(cols: number, i: number, j: number): number {
  return i * cols + j;
}

/** Build the 3D draw list: one projected point per buffer vertex, one colored
 * quad per face (painter-sorted by depth), and the tip markers. */
export function buildScene(view: GeometryView, camera: Camera = DEFAULT_CAMERA):
    Scene {
  const { buffer, rows, cols } = view;
  const points: ProjectedPoint[] = [];
  for (let k = 0; k < rows * cols; k += 1) {
    points.push(project(camera, buffer[3 * k], buffer[3 * k + 1], buffer[3 * k + 2]));
  }
  const quads: QuadFace[] = [];
  for (let i = 0; i < rows - 1; i += 1) {
    for (let j = 0; j < cols - 1; j += 1) {
      quads.push({
        strip: i,
        corners: [
          vertexIndex(cols, i, j),
          vertexIndex(cols, i, j + 1),
          vertexIndex(cols, i + 1, j + 1),
          vertexIndex(cols, i + 1, j),
        ],
        color: STRIP_COLORS[i % STRIP_COLORS.length],
      });
    }
  }
  quads.sort((a, b) => meanDepth(points, b) - meanDepth(points, a));
  const tips = view.doc.tips.map((tip) => project(camera, tip[0], tip[1], tip[2]));
  return { points, quads, tips };
}

function meanDepth(points: ProjectedPoint[], quad: QuadFace): number {
  return quad.corners.reduce((acc, k) => acc + points[k].depth, 0) / 4;
}

export interface UnfoldedColumn {
  phi: number;
  /** (d, z) pairs for every row of the column */
  points: Array<[number, number]>;
}

/** Unfold the net into the common meridian plane: the planar linkage view. */
export function unfoldLinkage(view: GeometryView): UnfoldedColumn[] {
  const { buffer, rows, cols } = view;
  const columns: UnfoldedColumn[] = [];
  for (let j = 0; j < cols; j += 1) {
    const pts: Array<[number, number]> = [];
    let phi = 0;
    for (let i = 0; i < rows; i += 1) {
      const k = 3 * vertexIndex(cols, i, j);
      const x = buffer[k];
      const y = buffer[k + 1];
      pts.push([Math.hypot(x, y), buffer[k + 2]]);
      if (i === 1) {
        phi = Math.atan2(y, x);
      }
    }
    columns.push({ phi, points: pts });
  }
  return columns;
}
