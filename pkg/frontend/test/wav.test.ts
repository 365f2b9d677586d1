import { describe, expect, it } from "vitest";

import { encodeWavPcm16Mono, resample, toCanonicalWav, TARGET_RATE } from "../src/wav.js";

function header(buffer: ArrayBuffer) {
  const view = new DataView(buffer);
  const tag = (offset: number) =>
    String.fromCharCode(...new Uint8Array(buffer, offset, 4));
  return {
    riff: tag(0),
    wave: tag(8),
    fmt: tag(12),
    audioFormat: view.getUint16(20, true),
    channels: view.getUint16(22, true),
    sampleRate: view.getUint32(24, true),
    byteRate: view.getUint32(28, true),
    blockAlign: view.getUint16(32, true),
    bitsPerSample: view.getUint16(34, true),
    data: tag(36),
    dataSize: view.getUint32(40, true),
  };
}

describe("encodeWavPcm16Mono", () => {
  it("writes the canonical PCM16 mono 16 kHz header", () => {
    const buffer = encodeWavPcm16Mono(new Float32Array(160));
    const h = header(buffer);
    expect(h.riff).toBe("RIFF");
    expect(h.wave).toBe("WAVE");
    expect(h.fmt).toBe("fmt ");
    expect(h.data).toBe("data");
    expect(h.audioFormat).toBe(1);
    expect(h.channels).toBe(1);
    expect(h.sampleRate).toBe(16000);
    expect(h.byteRate).toBe(32000);
    expect(h.blockAlign).toBe(2);
    expect(h.bitsPerSample).toBe(16);
    expect(h.dataSize).toBe(320);
    expect(buffer.byteLength).toBe(44 + 320);
  });

  it("scales samples by 32768 and clips the extremes", () => {
    const buffer = encodeWavPcm16Mono(new Float32Array([0, 0.5, 1.0, -1.0]));
    const view = new DataView(buffer);
    expect(view.getInt16(44, true)).toBe(0);
    expect(view.getInt16(46, true)).toBe(16384);
    expect(view.getInt16(48, true)).toBe(32767); // 32768 clips to int16 max
    expect(view.getInt16(50, true)).toBe(-32768);
  });
});

describe("resample", () => {
  it("keeps 16 kHz input untouched", () => {
    const samples = new Float32Array([0.1, 0.2, 0.3]);
    expect(resample(samples, TARGET_RATE)).toBe(samples);
  });

  it("halves the length from 32 kHz", () => {
    const samples = new Float32Array(3200).fill(0.25);
    const out = resample(samples, 32000);
    expect(out.length).toBe(1600);
    expect(out[800]).toBeCloseTo(0.25, 6);
  });

  it("preserves a constant signal from 44.1 kHz", () => {
    const out = resample(new Float32Array(4410).fill(-0.5), 44100);
    expect(out.length).toBe(1600);
    for (const v of out) expect(v).toBeCloseTo(-0.5, 6);
  });

  it("interpolates linearly between neighbours", () => {
    // downsampling [0, 1] by 2x samples the midpoint
    const out = resample(new Float32Array([0, 1]), 32000, 16000);
    expect(out.length).toBe(1);
    expect(out[0]).toBe(0);
  });
});

describe("toCanonicalWav", () => {
  it("produces a 16 kHz file from a 48 kHz capture", () => {
    const capture = new Float32Array(48000).fill(0.1); // one second
    const buffer = toCanonicalWav(capture, 48000);
    const h = header(buffer);
    expect(h.sampleRate).toBe(16000);
    expect(h.dataSize).toBe(16000 * 2);
  });
});
