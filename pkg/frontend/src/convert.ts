/**
 * Type conversions between analyst-facing values and store representations:
 * base58check addresses <-> 42-char hex, ISO timestamps -> epoch ms.
 */

import { createHash } from "node:crypto";

const ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";
const ALPHABET_INDEX = new Map([...ALPHABET].map((c, i) => [c, i]));

export class AddressError extends Error {}

function sha256(data: Buffer): Buffer {
  return createHash("sha256").update(data).digest();
}

function base58Encode(data: Buffer): string {
  let value = BigInt("0x" + (data.toString("hex") || "0"));
  let out = "";
  while (value > 0n) {
    out = ALPHABET[Number(value % 58n)] + out;
    value /= 58n;
  }
  for (const byte of data) {
    if (byte !== 0) break;
    out = ALPHABET[0] + out;
  }
  return out;
}

function base58Decode(text: string): Buffer {
  let value = 0n;
  for (const char of text) {
    const digit = ALPHABET_INDEX.get(char);
    if (digit === undefined) {
      throw new AddressError(`character ${JSON.stringify(char)} is not base58`);
    }
    value = value * 58n + BigInt(digit);
  }
  let hex = value.toString(16);
  if (hex.length % 2) hex = "0" + hex;
  let leading = 0;
  for (const char of text) {
    if (char !== ALPHABET[0]) break;
    leading += 1;
  }
  return Buffer.concat([Buffer.alloc(leading), Buffer.from(hex, "hex")]);
}

/** 21-byte (0x41-prefixed) address hex -> base58check text. */
export function addressHexToBase58(hex: string): string {
  if (!/^41[0-9a-f]{40}$/.test(hex)) {
    throw new AddressError(`not a 42-char 41-prefixed address hex: ${hex}`);
  }
  const payload = Buffer.from(hex, "hex");
  const check = sha256(sha256(payload)).subarray(0, 4);
  return base58Encode(Buffer.concat([payload, check]));
}

/** Base58check text -> lowercase 42-char address hex. */
export function addressBase58ToHex(text: string): string {
  const decoded = base58Decode(text);
  if (decoded.length !== 25) {
    throw new AddressError(`decoded to ${decoded.length} bytes, expected 25`);
  }
  const payload = decoded.subarray(0, 21);
  const check = decoded.subarray(21);
  if (!sha256(sha256(payload)).subarray(0, 4).equals(check)) {
    throw new AddressError(`bad checksum in ${text}`);
  }
  if (payload[0] !== 0x41) {
    throw new AddressError(`wrong version byte 0x${payload[0].toString(16)}`);
  }
  return payload.toString("hex");
}

export function looksLikeBase58Address(value: string): boolean {
  return value.length === 34 && value.startsWith("T");
}

/** ISO-8601 timestamp text -> epoch milliseconds. */
export function isoToMs(text: string): number {
  const ms = Date.parse(text);
  if (Number.isNaN(ms)) {
    throw new TypeError(`not an ISO-8601 timestamp: ${JSON.stringify(text)}`);
  }
  return ms;
}
