/**
 * Typed query construction: a QuerySpec validates against the schema
 * registry and becomes deterministic SQL text with bound parameters.
 * Filter values are converted to store representations (base58 addresses
 * to hex, ISO timestamps to epoch ms) before binding; values are never
 * interpolated into the SQL text.
 */

import {
  ColumnDef,
  SchemaRegistry,
  isNumericType,
} from "./manifest";
import {
  addressBase58ToHex,
  isoToMs,
  looksLikeBase58Address,
} from "./convert";

export type FilterOp = "=" | "!=" | "<" | "<=" | ">" | ">=" | "between" | "in";

export interface Filter {
  column: string;
  op: FilterOp;
  value: unknown;
}

export interface OrderTerm {
  column: string;
  desc?: boolean;
}

export interface QuerySpec {
  table: string;
  /** omitted = all columns in schema order */
  columns?: string[];
  filters?: Filter[];
  orderBy?: OrderTerm[];
  limit?: number;
}

export class FilterTypeError extends TypeError {}
export class InvalidSpec extends Error {}

export type Scalar = string | number | boolean;

export interface NormalizedFilter {
  column: string;
  op: FilterOp;
  /** converted store-representation operands; 2 for between, n for in */
  params: Scalar[];
}

export interface BuiltQuery {
  sql: string;
  params: Scalar[];
}

function convertScalar(value: unknown, col: ColumnDef): Scalar {
  if (col.type === "address" && typeof value === "string") {
    if (looksLikeBase58Address(value)) return addressBase58ToHex(value);
    if (/^41[0-9a-f]{40}$/.test(value)) return value;
    throw new FilterTypeError(
      `column ${col.name}: ${JSON.stringify(value)} is neither base58 nor address hex`,
    );
  }
  if (isNumericType(col.type)) {
    if (typeof value === "number" && Number.isFinite(value)) return value;
    if (typeof value === "string") return isoToMs(value); // timestamps arrive as ISO text
    throw new FilterTypeError(`column ${col.name}: expected a number, got ${typeof value}`);
  }
  if (col.type === "bool") {
    if (typeof value === "boolean") return value;
    throw new FilterTypeError(`column ${col.name}: expected a boolean`);
  }
  // hash | hex | text
  if (typeof value === "string") return value;
  throw new FilterTypeError(`column ${col.name}: expected a string, got ${typeof value}`);
}

export function normalizeFilter(
  filter: Filter,
  registry: SchemaRegistry,
  table: string,
): NormalizedFilter {
  const col = registry.column(table, filter.column);
  if (col.type.startsWith("array(")) {
    throw new FilterTypeError(`column ${col.name}: array columns are not filterable`);
  }
  if (filter.op === "between") {
    if (!Array.isArray(filter.value) || filter.value.length !== 2) {
      throw new FilterTypeError(`between needs a [low, high] pair`);
    }
    return {
      column: filter.column,
      op: filter.op,
      params: filter.value.map((v) => convertScalar(v, col)),
    };
  }
  if (filter.op === "in") {
    if (!Array.isArray(filter.value) || filter.value.length === 0) {
      throw new FilterTypeError(`in needs a non-empty value list`);
    }
    return {
      column: filter.column,
      op: filter.op,
      params: filter.value.map((v) => convertScalar(v, col)),
    };
  }
  return {
    column: filter.column,
    op: filter.op,
    params: [convertScalar(filter.value, col)],
  };
}

export interface NormalizedSpec {
  table: string;
  columns: string[];
  filters: NormalizedFilter[];
  orderBy: Required<OrderTerm>[];
  limit?: number;
}

export function normalizeSpec(spec: QuerySpec, registry: SchemaRegistry): NormalizedSpec {
  const table = registry.table(spec.table);
  const columns = spec.columns ?? table.columns.map((c) => c.name);
  for (const name of columns) registry.column(spec.table, name);
  if (columns.length === 0) throw new InvalidSpec("column list is empty");
  const orderBy = (spec.orderBy ?? []).map((term) => {
    registry.column(spec.table, term.column);
    return { column: term.column, desc: term.desc ?? false };
  });
  if (spec.limit !== undefined && (!Number.isInteger(spec.limit) || spec.limit < 1)) {
    throw new InvalidSpec(`limit must be a positive integer, got ${spec.limit}`);
  }
  return {
    table: spec.table,
    columns,
    filters: (spec.filters ?? []).map((f) => normalizeFilter(f, registry, spec.table)),
    orderBy,
    limit: spec.limit,
  };
}

const q = (identifier: string) => `"${identifier}"`;

export function buildQuery(spec: QuerySpec, registry: SchemaRegistry): BuiltQuery {
  const norm = normalizeSpec(spec, registry);
  const params: Scalar[] = [];
  const parts = [`SELECT ${norm.columns.map(q).join(", ")} FROM ${q(norm.table)}`];

  if (norm.filters.length) {
    const predicates = norm.filters.map((f) => {
      params.push(...f.params);
      if (f.op === "between") return `${q(f.column)} BETWEEN ? AND ?`;
      if (f.op === "in") return `${q(f.column)} IN (${f.params.map(() => "?").join(", ")})`;
      return `${q(f.column)} ${f.op} ?`;
    });
    parts.push(`WHERE ${predicates.join(" AND ")}`);
  }
  if (norm.orderBy.length) {
    parts.push(
      `ORDER BY ${norm.orderBy
        .map((t) => `${q(t.column)} ${t.desc ? "DESC" : "ASC"}`)
        .join(", ")}`,
    );
  }
  if (norm.limit !== undefined) parts.push(`LIMIT ${norm.limit}`);
  return { sql: parts.join(" "), params };
}
