import { describe, expect, it } from "vitest";

import { centerPixel, clientToPixel, dragToRect, zoomWindow, zoomedConfig } from "../src/mapview.js";
import type { MapConfigBody } from "../src/types.js";

const box = { left: 10, top: 20, width: 200, height: 100 };

describe("clientToPixel", () => {
  it("maps the box corners to the corner pixels", () => {
    expect(clientToPixel(box, 8, 8, 10, 20)).toEqual({ px: 0, py: 0 });
    expect(clientToPixel(box, 8, 8, 209, 119)).toEqual({ px: 7, py: 7 });
  });

  it("maps the box center to the center pixel", () => {
    expect(clientToPixel(box, 8, 8, 110, 70)).toEqual({ px: 4, py: 4 });
  });

  it("returns null outside the box", () => {
    expect(clientToPixel(box, 8, 8, 5, 50)).toBeNull();
    expect(clientToPixel(box, 8, 8, 210, 50)).toBeNull();
  });
});

describe("zoomWindow", () => {
  it("full rectangle is the identity", () => {
    expect(zoomWindow([0, 0, 1, 1], 8, 8, { x0: 0, y0: 0, x1: 8, y1: 8 })).toEqual([0, 0, 1, 1]);
  });

  it("left half twice quarters the u span", () => {
    const once = zoomWindow([0, 0, 1, 1], 8, 8, { x0: 0, y0: 0, x1: 4, y1: 8 });
    const twice = zoomWindow(once, 8, 8, { x0: 0, y0: 0, x1: 4, y1: 8 });
    expect(twice[2] - twice[0]).toBeCloseTo(0.25, 12);
    expect(twice[3] - twice[1]).toBeCloseTo(1.0, 12);
  });

  it("composes within nested windows", () => {
    const nested = zoomWindow([0.25, 0.5, 0.75, 1.0], 10, 10, { x0: 5, y0: 0, x1: 10, y1: 5 });
    expect(nested).toEqual([0.5, 0.5, 0.75, 0.75]);
  });
});

describe("dragToRect", () => {
  it("orders and clips the gesture", () => {
    expect(dragToRect(6.7, 5.2, 1.1, 2.9, 8, 8)).toEqual({ x0: 1, y0: 2, x1: 7, y1: 6 });
  });

  it("rejects empty rectangles", () => {
    expect(dragToRect(3, 3, 3, 3, 8, 8)).toBeNull();
  });
});

describe("zoomedConfig", () => {
  const config: MapConfigBody = {
    kind: "julia_orbit",
    mapped: ["c_re", "c_im"],
    fixed: {},
    window: [0, 0, 1, 1],
    width: 8,
    height: 8,
    feature: "note_count",
  };

  it("replaces only the window", () => {
    const z = zoomedConfig(config, { x0: 0, y0: 0, x1: 4, y1: 8 });
    expect(z.window).toEqual([0, 0, 0.5, 1]);
    expect(z.width).toBe(8);
    expect(z.mapped).toEqual(config.mapped);
  });

  it("centerPixel picks the middle", () => {
    expect(centerPixel(config)).toEqual({ px: 4, py: 4 });
  });
});
