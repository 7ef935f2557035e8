/** Browser wiring: canvas panes, fold slider, case picker and parallel panel.
 *
 * Every vertex on screen comes from the service geometry held in the session
 * store; this file only draws and forwards events. */

import { ServiceClient } from "./api.js";
import {
  DesignSession,
  EDIT_DEBOUNCE_MS,
  debounced,
} from "./store.js";
import {
  dragPhi,
  dragPoint,
  handlesFromGeometry,
  toProfileEntries,
  type ProfileHandle,
} from "./polyline.js";
import { DEFAULT_CAMERA, buildScene, unfoldLinkage, type Camera } from "./viewer.js";
import type { NetSpecDocument } from "./types.js";

const SAMPLE_SPEC: NetSpecDocument = {
  a_ref: 2.0,
  branch: "+",
  cases: ["Scaling_1a"],
  initial: { s: Math.SQRT2, t: Math.SQRT2, u: 2.0, v: Math.SQRT2 },
  profile: [
    { s: 2.0, t: 2.0, phi: Math.PI / 6 },
    { s: 2.0, t: 2.0, phi: Math.PI / 3 },
    { s: 2.0, t: 2.0, phi: Math.PI / 2 },
  ],
  boundary: { lambda_top: 0.5, lambda_bottom: 0.5 },
};

function element<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function drawViewport(canvas: HTMLCanvasElement, session: DesignSession,
                      camera: Camera): void {
  const ctx = canvas.getContext("2d");
  if (!ctx || !session.geometry) {
    return;
  }
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const scene = buildScene(session.geometry, {
    ...camera,
    viewWidth: canvas.width,
    viewHeight: canvas.height,
  });
  for (const quad of scene.quads) {
    ctx.beginPath();
    quad.corners.forEach((k, n) => {
      const p = scene.points[k];
      if (n === 0) {
        ctx.moveTo(p.x, p.y);
      } else {
        ctx.lineTo(p.x, p.y);
      }
    });
    ctx.closePath();
    ctx.fillStyle = quad.color + "55";
    ctx.strokeStyle = quad.color;
    ctx.fill();
    ctx.stroke();
  }
  ctx.fillStyle = "#222";
  for (const tip of scene.tips) {
    ctx.beginPath();
    ctx.arc(tip.x, tip.y, 4, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function drawLinkagePane(canvas: HTMLCanvasElement, session: DesignSession): void {
  const ctx = canvas.getContext("2d");
  if (!ctx || !session.geometry) {
    return;
  }
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const columns = unfoldLinkage(session.geometry);
  const allD = columns.flatMap((c) => c.points.map((p) => p[0]));
  const allZ = columns.flatMap((c) => c.points.map((p) => p[1]));
  const scale = 0.8 * Math.min(
    canvas.width / Math.max(...allD, 1e-9),
    canvas.height / Math.max(Math.max(...allZ) - Math.min(...allZ, 0), 1e-9),
  );
  const zOffset = Math.min(...allZ, 0);
  const toScreen = (d: number, z: number): [number, number] => [
    20 + scale * d,
    canvas.height - 20 - scale * (z - zOffset),
  ];
  ctx.strokeStyle = "#888";
  for (const column of columns) {
    ctx.beginPath();
    column.points.forEach(([d, z], n) => {
      const [x, y] = toScreen(d, z);
      if (n === 0) {
        ctx.moveTo(x, y);
      } else {
        ctx.lineTo(x, y);
      }
    });
    ctx.stroke();
  }
  // axis with tip markers
  ctx.strokeStyle = "#333";
  ctx.beginPath();
  const [x0, y0] = toScreen(0, Math.min(...allZ, 0));
  const [x1, y1] = toScreen(0, Math.max(...allZ));
  ctx.moveTo(x0, y0);
  ctx.lineTo(x1, y1);
  ctx.stroke();
  ctx.fillStyle = "#c33";
  for (const tip of session.geometry.doc.tips) {
    const [x, y] = toScreen(0, tip[2]);
    ctx.beginPath();
    ctx.arc(x, y, 3, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function renderBadges(container: HTMLElement, session: DesignSession): void {
  container.innerHTML = "";
  for (const badge of session.badges) {
    const span = document.createElement("span");
    span.className = badge.ok ? "badge ok" : "badge fail";
    span.textContent = `${badge.name}: ${badge.ok ? "ok" : "fail"}`;
    container.appendChild(span);
  }
  if (session.boundary) {
    const span = document.createElement("span");
    span.className = "badge boundary";
    span.textContent = "flexion limit";
    container.appendChild(span);
  }
  if (session.lastError) {
    const span = document.createElement("span");
    span.className = "badge fail";
    span.textContent = session.lastError;
    container.appendChild(span);
  }
}

export function startApp(): void {
  const client = new ServiceClient("");
  const session = new DesignSession(client);
  const camera: Camera = { ...DEFAULT_CAMERA };

  const viewport = element<HTMLCanvasElement>("viewport");
  const linkagePane = element<HTMLCanvasElement>("linkage");
  const slider = element<HTMLInputElement>("fold-slider");
  const badges = element<HTMLElement>("badges");
  const casePicker = element<HTMLSelectElement>("case-picker");
  const rowScalesInput = element<HTMLInputElement>("row-scales");
  const colScalesInput = element<HTMLInputElement>("col-scales");
  const applyScales = element<HTMLButtonElement>("apply-scales");
  const undoButton = element<HTMLButtonElement>("undo");
  let handles: ProfileHandle[] = [];

  const redraw = () => {
    drawViewport(viewport, session, camera);
    drawLinkagePane(linkagePane, session);
    renderBadges(badges, session);
    if (session.geometry && session.spec) {
      const phis = [0, ...session.spec.profile.map((e) => e.phi)];
      handles = handlesFromGeometry(session.geometry.doc, phis);
    }
    const [lo, hi] = session.usableRange;
    slider.min = String(lo);
    slider.max = String(hi);
    slider.step = String((hi - lo) / 200 || 1);
    slider.value = String(session.sliderValue);
  };

  const postEdit = debounced(() => {
    void session.editProfile(toProfileEntries(handles)).then(redraw);
  }, EDIT_DEBOUNCE_MS);

  slider.addEventListener("input", () => {
    void session.setSlider(Number(slider.value)).then(redraw);
  });

  casePicker.addEventListener("change", () => {
    void session.switchCase(casePicker.value).then(redraw);
  });

  applyScales.addEventListener("click", () => {
    const rows = rowScalesInput.value.split(",").map(Number);
    const cols = colScalesInput.value.split(",").map(Number);
    void session.applyParallel(rows, cols).then(redraw);
  });

  undoButton.addEventListener("click", () => {
    void session.undo().then(redraw);
  });

  viewport.addEventListener("pointermove", (event) => {
    if (event.buttons === 1) {
      camera.yaw += event.movementX * 0.01;
      camera.pitch += event.movementY * 0.01;
      drawViewport(viewport, session, camera);
    }
  });

  // illustrative in-plane drag on the linkage pane: move the nearest handle
  linkagePane.addEventListener("dblclick", (event) => {
    if (!handles.length) {
      return;
    }
    const index = Math.min(handles.length - 1,
                           1 + Math.floor(event.offsetX / 80));
    const result = dragPoint(handles, index,
                             handles[index].d * 1.02, handles[index].z);
    if (result.error) {
      session.lastError = result.error;
      renderBadges(badges, session);
      return;
    }
    const kept = dragPhi(result.handles, index, result.handles[index].phi);
    handles = kept.handles;
    postEdit();
  });

  void session.load(SAMPLE_SPEC).then(redraw);
}

if (typeof document !== "undefined" && document.getElementById("viewport")) {
  startApp();
}
