/** Client-side audio conditioning: resample captured Float32 audio to
 * the server's canonical contract (16 kHz mono PCM16 WAV). */

export const TARGET_RATE = 16000;

/** Linear-interpolation resampler; adequate for speech capture. */
export function resample(samples: Float32Array, fromRate: number,
                         toRate: number = TARGET_RATE): Float32Array {
  if (fromRate === toRate) return samples;
  if (fromRate <= 0 || toRate <= 0) throw new Error("sample rates must be positive");
  const ratio = fromRate / toRate;
  const length = Math.max(1, Math.floor(samples.length / ratio));
  const out = new Float32Array(length);
  for (let i = 0; i < length; i++) {
    const pos = i * ratio;
    const left = Math.floor(pos);
    const right = Math.min(left + 1, samples.length - 1);
    const frac = pos - left;
    out[i] = samples[left] * (1 - frac) + samples[right] * frac;
  }
  return out;
}

/** RIFF/WAVE PCM16 mono encoder mirroring the server's decoder
 * (sample = round(x * 32768), clipped to int16). */
export function encodeWavPcm16Mono(samples: Float32Array,
                                   sampleRate: number = TARGET_RATE): ArrayBuffer {
  const dataSize = samples.length * 2;
  const buffer = new ArrayBuffer(44 + dataSize);
  const view = new DataView(buffer);
  const ascii = (offset: number, text: string) => {
    for (let i = 0; i < text.length; i++) view.setUint8(offset + i, text.charCodeAt(i));
  };
  ascii(0, "RIFF");
  view.setUint32(4, 36 + dataSize, true);
  ascii(8, "WAVE");
  ascii(12, "fmt ");
  view.setUint32(16, 16, true);          // fmt chunk size
  view.setUint16(20, 1, true);           // PCM
  view.setUint16(22, 1, true);           // mono
  view.setUint32(24, sampleRate, true);
  view.setUint32(28, sampleRate * 2, true);  // byte rate
  view.setUint16(32, 2, true);           // block align
  view.setUint16(34, 16, true);          // bits per sample
  ascii(36, "data");
  view.setUint32(40, dataSize, true);
  for (let i = 0; i < samples.length; i++) {
    const scaled = Math.round(samples[i] * 32768);
    view.setInt16(44 + i * 2, Math.max(-32768, Math.min(32767, scaled)), true);
  }
  return buffer;
}

/** Capture output -> canonical WAV bytes. */
export function toCanonicalWav(samples: Float32Array, captureRate: number): ArrayBuffer {
  return encodeWavPcm16Mono(resample(samples, captureRate), TARGET_RATE);
}
