/**
 * Local fetch engine: evaluates a QuerySpec directly over sink segment
 * files, applying the same normalized predicates the SQL builder binds,
 * then lifting store values to analyst types on request.
 */

import { SchemaRegistry } from "./manifest";
import { addressHexToBase58 } from "./convert";
import { frameFromRows, ResultFrame } from "./frame";
import { NormalizedFilter, normalizeSpec, QuerySpec, Scalar } from "./query";
import { readTable, Row } from "./segments";

export interface FetchOptions {
  /** render address-typed columns as base58check text instead of hex */
  base58Addresses?: boolean;
}

function cmp(a: Scalar, b: Scalar): number {
  if (a < b) return -1;
  if (a > b) return 1;
  return 0;
}

export function rowMatches(row: Row, filter: NormalizedFilter): boolean {
  const value = row[filter.column];
  if (filter.op === "!=") return value !== filter.params[0];
  if (value === null || value === undefined) return false;
  const scalar = value as Scalar;
  switch (filter.op) {
    case "=":
      return scalar === filter.params[0];
    case "<":
      return cmp(scalar, filter.params[0]) < 0;
    case "<=":
      return cmp(scalar, filter.params[0]) <= 0;
    case ">":
      return cmp(scalar, filter.params[0]) > 0;
    case ">=":
      return cmp(scalar, filter.params[0]) >= 0;
    case "between":
      return (
        cmp(scalar, filter.params[0]) >= 0 && cmp(scalar, filter.params[1]) <= 0
      );
    case "in":
      return filter.params.includes(scalar);
  }
}

export class LocalStore {
  constructor(
    private readonly root: string,
    private readonly registry: SchemaRegistry,
  ) {}

  fetch(spec: QuerySpec, options: FetchOptions = {}): ResultFrame {
    const norm = normalizeSpec(spec, this.registry);
    let rows = readTable(this.root, norm.table, this.registry);
    for (const filter of norm.filters) {
      rows = rows.filter((row) => rowMatches(row, filter));
    }
    if (norm.orderBy.length) {
      const terms = norm.orderBy;
      rows = [...rows].sort((a, b) => {
        for (const term of terms) {
          const delta = cmp(a[term.column] as Scalar, b[term.column] as Scalar);
          if (delta !== 0) return term.desc ? -delta : delta;
        }
        return 0;
      });
    }
    if (norm.limit !== undefined) rows = rows.slice(0, norm.limit);

    const columns = norm.columns.map((name) => this.registry.column(norm.table, name));
    const frame = frameFromRows(columns, rows);
    if (options.base58Addresses) {
      for (const col of columns) {
        if (col.type !== "address") continue;
        frame.values[col.name] = frame.values[col.name].map((v) =>
          typeof v === "string" && v !== "" ? addressHexToBase58(v) : v,
        );
      }
    }
    return frame;
  }
}
