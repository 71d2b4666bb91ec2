import assert from "node:assert/strict";
import { test } from "node:test";
import { inflateSync } from "node:zlib";

import { crc32, encodePng } from "../src/png";

export interface DecodedPng {
  width: number;
  height: number;
  pixel: (x: number, y: number) => [number, number, number, number];
}

/** Minimal strict decoder for images produced by encodePng (filter 0). */
export function decodePng(buf: Buffer): DecodedPng {
  const sig = Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
  assert.ok(buf.subarray(0, 8).equals(sig), "png signature");
  let off = 8;
  let width = 0;
  let height = 0;
  const idatParts: Buffer[] = [];
  while (off < buf.length) {
    const len = buf.readUInt32BE(off);
    const type = buf.subarray(off + 4, off + 8).toString("ascii");
    const data = buf.subarray(off + 8, off + 8 + len);
    const crc = buf.readUInt32BE(off + 8 + len);
    assert.equal(crc, crc32(buf.subarray(off + 4, off + 8 + len)), `crc of ${type}`);
    if (type === "IHDR") {
      width = data.readUInt32BE(0);
      height = data.readUInt32BE(4);
      assert.equal(data[8], 8, "bit depth");
      assert.equal(data[9], 6, "rgba color type");
    } else if (type === "IDAT") {
      idatParts.push(Buffer.from(data));
    }
    off += 12 + len;
  }
  const raw = inflateSync(Buffer.concat(idatParts));
  const stride = 1 + width * 4;
  assert.equal(raw.length, height * stride, "scanline payload size");
  for (let y = 0; y < height; y++) {
    assert.equal(raw[y * stride], 0, `filter byte of row ${y}`);
  }
  return {
    width,
    height,
    pixel: (x, y) => {
      const i = y * stride + 1 + x * 4;
      return [raw[i], raw[i + 1], raw[i + 2], raw[i + 3]];
    },
  };
}

test("round-trips a small gradient image", () => {
  const w = 9;
  const h = 5;
  const rgba = new Uint8Array(w * h * 4);
  for (let y = 0; y < h; y++) {
    for (let x = 0; x < w; x++) {
      rgba.set([x * 20, y * 40, 128, 255], (y * w + x) * 4);
    }
  }
  const png = encodePng(w, h, rgba);
  const img = decodePng(png);
  assert.equal(img.width, w);
  assert.equal(img.height, h);
  assert.deepEqual(img.pixel(3, 2), [60, 80, 128, 255]);
  assert.deepEqual(img.pixel(8, 4), [160, 160, 128, 255]);
});

test("deterministic bytes for fixed pixels", () => {
  const rgba = new Uint8Array(16 * 16 * 4).fill(200);
  assert.ok(encodePng(16, 16, rgba).equals(encodePng(16, 16, rgba)));
});

test("rejects mis-sized buffers", () => {
  assert.throws(() => encodePng(4, 4, new Uint8Array(3)));
});
