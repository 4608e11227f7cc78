/**
 * Builds the test dataset once per run by shelling out to the pipeline
 * CLI: a deterministic 30-block fixture chain loaded into a local sink,
 * plus the schema manifest. Idempotent: skipped when already present.
 * Paths are relative to the package root (vitest's working directory).
 */

import { execFileSync } from "node:child_process";
import { existsSync, rmSync } from "node:fs";
import { join, resolve } from "node:path";

export const TESTDATA = resolve("testdata");
export const CHAIN_DIR = join(TESTDATA, "chain");
export const SINK_DIR = join(TESTDATA, "sink");
export const MANIFEST_PATH = join(TESTDATA, "schema.json");

function cli(...args: string[]): void {
  execFileSync("python3", ["-m", "tronetl.cli", ...args], { stdio: "pipe" });
}

export default function setup(): void {
  if (existsSync(MANIFEST_PATH) && existsSync(join(SINK_DIR, "blocks"))) return;
  rmSync(TESTDATA, { recursive: true, force: true });
  cli("fixtures", "generate", "--dir", CHAIN_DIR, "--blocks", "30", "--seed", "13");
  cli(
    "etl", "run", "--source", CHAIN_DIR, "--sink", SINK_DIR,
    "--from", "0", "--to", "29", "--batch", "10",
  );
  cli("schema", "emit", "--format", "manifest", "--output", MANIFEST_PATH);
}
