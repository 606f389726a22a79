/** Map-view math: screen coordinates vs map pixels vs unit-square
 * windows.  Mirrors the engine's conventions exactly, which the
 * integration tests assert: pixel (px, py) samples the center of its
 * cell, and zooming to a pixel rectangle spans the corresponding
 * sub-window. */

import type { MapConfigBody, WindowRect } from "./types.js";

export interface PixelRect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

/** Map pixel under a screen point, given the drawn image box. */
export function clientToPixel(
  box: { left: number; top: number; width: number; height: number },
  mapWidth: number,
  mapHeight: number,
  clientX: number,
  clientY: number,
): { px: number; py: number } | null {
  const fx = (clientX - box.left) / box.width;
  const fy = (clientY - box.top) / box.height;
  if (fx < 0 || fx >= 1 || fy < 0 || fy >= 1) return null;
  return { px: Math.floor(fx * mapWidth), py: Math.floor(fy * mapHeight) };
}

/** Window spanned by a pixel rectangle: the engine's zoom rule. */
export function zoomWindow(window: WindowRect, width: number, height: number, rect: PixelRect): WindowRect {
  const [u0, v0, u1, v1] = window;
  const du = u1 - u0;
  const dv = v1 - v0;
  return [
    u0 + (rect.x0 / width) * du,
    v0 + (rect.y0 / height) * dv,
    u0 + (rect.x1 / width) * du,
    v0 + (rect.y1 / height) * dv,
  ];
}

/** Normalize a drag gesture into a well-ordered, non-empty pixel rect. */
export function dragToRect(
  ax: number, ay: number, bx: number, by: number,
  mapWidth: number, mapHeight: number,
): PixelRect | null {
  const x0 = Math.max(Math.floor(Math.min(ax, bx)), 0);
  const y0 = Math.max(Math.floor(Math.min(ay, by)), 0);
  const x1 = Math.min(Math.ceil(Math.max(ax, bx)), mapWidth);
  const y1 = Math.min(Math.ceil(Math.max(ay, by)), mapHeight);
  if (x1 - x0 < 1 || y1 - y0 < 1) return null;
  return { x0, y0, x1, y1 };
}

/** Config for recomputing the map over a selected pixel rectangle. */
export function zoomedConfig(config: MapConfigBody, rect: PixelRect): MapConfigBody {
  return {
    ...config,
    window: zoomWindow(config.window, config.width, config.height, rect),
  };
}

/** Center pixel of a map, used for zoom-consistency checks. */
export function centerPixel(config: MapConfigBody): { px: number; py: number } {
  return { px: Math.floor(config.width / 2), py: Math.floor(config.height / 2) };
}
