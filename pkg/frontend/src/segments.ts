/**
 * Reader for local sink tables: each table is a directory of append-only
 * `.rows` segments (magic ROWSEG01, u32-BE length-prefixed JSON header,
 * then length-prefixed JSON rows). Duplicate primary keys collapse with
 * the highest segment `seq` winning, mirroring the writer's semantics.
 */

import { readdirSync, readFileSync } from "node:fs";
import { join } from "node:path";

import { SchemaRegistry, TableDef } from "./manifest";

const MAGIC = Buffer.from("ROWSEG01");

export type Row = Record<string, unknown>;

export class SegmentFormatError extends Error {}

interface Segment {
  seq: number;
  rows: Row[];
}

function readSegment(path: string): Segment {
  const data = readFileSync(path);
  if (!data.subarray(0, MAGIC.length).equals(MAGIC)) {
    throw new SegmentFormatError(`${path}: bad segment magic`);
  }
  let pos = MAGIC.length;
  const headerLen = data.readUInt32BE(pos);
  pos += 4;
  const header = JSON.parse(data.subarray(pos, pos + headerLen).toString("utf-8"));
  pos += headerLen;
  const rows: Row[] = [];
  while (pos < data.length) {
    const rowLen = data.readUInt32BE(pos);
    pos += 4;
    rows.push(JSON.parse(data.subarray(pos, pos + rowLen).toString("utf-8")));
    pos += rowLen;
  }
  return { seq: header.seq, rows };
}

function keyOf(row: Row, table: TableDef): string {
  return JSON.stringify(table.primaryKey.map((k) => row[k]));
}

/** All logical rows of a table, deduplicated and ordered by primary key. */
export function readTable(root: string, tableName: string, registry: SchemaRegistry): Row[] {
  const table = registry.table(tableName);
  const dir = join(root, tableName);
  let files: string[];
  try {
    files = readdirSync(dir).filter((f) => f.endsWith(".rows"));
  } catch {
    return [];
  }
  const segments = files.map((f) => readSegment(join(dir, f)));
  segments.sort((a, b) => a.seq - b.seq);
  const merged = new Map<string, Row>();
  for (const segment of segments) {
    for (const row of segment.rows) merged.set(keyOf(row, table), row);
  }
  const rows = [...merged.values()];
  rows.sort((a, b) => {
    for (const k of table.primaryKey) {
      const av = a[k] as number | string;
      const bv = b[k] as number | string;
      if (av < bv) return -1;
      if (av > bv) return 1;
    }
    return 0;
  });
  return rows;
}
