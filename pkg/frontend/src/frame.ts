/**
 * ResultFrame: a column-major table of named, semantically typed value
 * arrays of equal length.
 */

import { ColumnDef } from "./manifest";
import { Row } from "./segments";

export interface ResultFrame {
  columns: ColumnDef[];
  /** column name -> values; every array has length `length` */
  values: Record<string, unknown[]>;
  length: number;
}

export class FrameError extends Error {}

export function frameFromRows(columns: ColumnDef[], rows: Row[]): ResultFrame {
  const values: Record<string, unknown[]> = {};
  for (const col of columns) {
    values[col.name] = rows.map((row) => row[col.name] ?? null);
  }
  return { columns, values, length: rows.length };
}

export function frameToRows(frame: ResultFrame): Row[] {
  const rows: Row[] = [];
  for (let i = 0; i < frame.length; i++) {
    const row: Row = {};
    for (const col of frame.columns) row[col.name] = frame.values[col.name][i];
    rows.push(row);
  }
  return rows;
}

export function assertWellFormed(frame: ResultFrame): void {
  for (const col of frame.columns) {
    const arr = frame.values[col.name];
    if (!arr || arr.length !== frame.length) {
      throw new FrameError(
        `column ${col.name} has ${arr?.length ?? "no"} values, expected ${frame.length}`,
      );
    }
  }
}

export function framesEqual(a: ResultFrame, b: ResultFrame): boolean {
  if (a.length !== b.length) return false;
  const names = a.columns.map((c) => c.name);
  if (JSON.stringify(names) !== JSON.stringify(b.columns.map((c) => c.name))) {
    return false;
  }
  for (const name of names) {
    if (JSON.stringify(a.values[name]) !== JSON.stringify(b.values[name])) {
      return false;
    }
  }
  return true;
}
