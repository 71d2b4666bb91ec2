/** RGBA pixel canvas with the primitives the figure needs: filled
 * rectangles, clipped lines, and 5x7 bitmap text. */

import { GLYPHS, GLYPH_FALLBACK } from "./font";

export type Color = [number, number, number, number];

export const WHITE: Color = [255, 255, 255, 255];
export const BLACK: Color = [0, 0, 0, 255];
export const GRID_GRAY: Color = [220, 220, 220, 255];
export const HIST_BLUE: Color = [114, 158, 206, 255];
export const HIST_BLUE_EDGE: Color = [52, 96, 156, 255];
export const DENSITY_RED: Color = [214, 39, 40, 255];

export class Raster {
  readonly pixels: Uint8Array;

  constructor(readonly width: number, readonly height: number, fill: Color = WHITE) {
    this.pixels = new Uint8Array(width * height * 4);
    for (let i = 0; i < width * height; i++) {
      this.pixels.set(fill, i * 4);
    }
  }

  set(x: number, y: number, c: Color): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    this.pixels.set(c, (y * this.width + x) * 4);
  }

  get(x: number, y: number): Color {
    const i = (y * this.width + x) * 4;
    return [this.pixels[i], this.pixels[i + 1], this.pixels[i + 2], this.pixels[i + 3]];
  }

  fillRect(x0: number, y0: number, x1: number, y1: number, c: Color): void {
    const xa = Math.max(0, Math.min(x0, x1));
    const xb = Math.min(this.width - 1, Math.max(x0, x1));
    const ya = Math.max(0, Math.min(y0, y1));
    const yb = Math.min(this.height - 1, Math.max(y0, y1));
    for (let y = ya; y <= yb; y++) {
      for (let x = xa; x <= xb; x++) {
        this.pixels.set(c, (y * this.width + x) * 4);
      }
    }
  }

  /** Bresenham segment with a square pen of the given thickness. */
  line(x0: number, y0: number, x1: number, y1: number, c: Color, thickness = 1): void {
    let xa = Math.round(x0);
    let ya = Math.round(y0);
    const xb = Math.round(x1);
    const yb = Math.round(y1);
    const dx = Math.abs(xb - xa);
    const dy = -Math.abs(yb - ya);
    const sx = xa < xb ? 1 : -1;
    const sy = ya < yb ? 1 : -1;
    let err = dx + dy;
    const r = Math.floor(thickness / 2);
    for (;;) {
      if (thickness === 1) {
        this.set(xa, ya, c);
      } else {
        this.fillRect(xa - r, ya - r, xa + thickness - 1 - r, ya + thickness - 1 - r, c);
      }
      if (xa === xb && ya === yb) break;
      const e2 = 2 * err;
      if (e2 >= dy) { err += dy; xa += sx; }
      if (e2 <= dx) { err += dx; ya += sy; }
    }
  }

  /** 5x7 bitmap text, uppercased; scale multiplies the glyph cell. */
  text(x: number, y: number, s: string, c: Color, scale = 1): void {
    let cx = x;
    for (const ch of s.toUpperCase()) {
      const glyph = GLYPHS[ch] ?? GLYPH_FALLBACK;
      for (let col = 0; col < 5; col++) {
        const bits = glyph[col];
        for (let row = 0; row < 7; row++) {
          if (bits & (1 << row)) {
            this.fillRect(cx + col * scale, y + row * scale,
                          cx + (col + 1) * scale - 1, y + (row + 1) * scale - 1, c);
          }
        }
      }
      cx += 6 * scale;
    }
  }
}

export function textWidth(s: string, scale = 1): number {
  return s.length * 6 * scale - scale;
}
