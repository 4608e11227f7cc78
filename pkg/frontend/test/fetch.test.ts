import { describe, expect, it } from "vitest";

import { LocalStore } from "../src/fetch";
import { frameToRows } from "../src/frame";
import { SchemaRegistry } from "../src/manifest";
import { QuerySpec, Scalar } from "../src/query";
import { Row, readTable } from "../src/segments";
import { MANIFEST_PATH, SINK_DIR } from "./setup";

const registry = SchemaRegistry.fromFile(MANIFEST_PATH);
const store = new LocalStore(SINK_DIR, registry);

describe("LocalStore.fetch", () => {
  it("returns every loaded block", () => {
    const frame = store.fetch({ table: "blocks" });
    expect(frame.length).toBe(30);
    expect(frame.values["blockNum"]).toEqual([...Array(30).keys()]);
  });

  it("limit 1 ordered by blockNum yields the genesis row", () => {
    const frame = store.fetch({
      table: "blocks",
      orderBy: [{ column: "blockNum" }],
      limit: 1,
    });
    expect(frame.length).toBe(1);
    expect(frame.values["blockNum"]).toEqual([0]);
    expect(frame.values["transactionCount"]).toEqual([0]);
    expect(frame.values["parentHash"]).toEqual(["0".repeat(64)]);
  });

  it("a query matching nothing returns an empty, schema-typed frame", () => {
    const frame = store.fetch({
      table: "blocks",
      filters: [{ column: "blockNum", op: ">", value: 10_000 }],
    });
    expect(frame.length).toBe(0);
    expect(frame.columns.map((c) => c.name)).toEqual(
      registry.table("blocks").columns.map((c) => c.name),
    );
    expect(frame.values["blockNum"]).toEqual([]);
  });

  it("matches rows the pipeline inserted, column for column", () => {
    const frame = store.fetch({
      table: "blocks",
      filters: [{ column: "blockNum", op: "between", value: [0, 2] }],
    });
    const direct = readTable(SINK_DIR, "blocks", registry).slice(0, 3);
    expect(frameToRows(frame)).toEqual(direct);
  });

  it("parent hashes chain across consecutive blocks", () => {
    const frame = store.fetch({ table: "blocks", columns: ["hash", "parentHash"] });
    for (let i = 1; i < frame.length; i++) {
      expect(frame.values["parentHash"][i]).toBe(frame.values["hash"][i - 1]);
    }
  });

  it("lifts address columns to base58 on request", () => {
    const frame = store.fetch(
      { table: "blocks", columns: ["witnessAddress"], limit: 1 },
      { base58Addresses: true },
    );
    const text = frame.values["witnessAddress"][0] as string;
    expect(text.startsWith("T")).toBe(true);
    expect(text).toHaveLength(34);
  });
});

// Deterministic PRNG so failures reproduce.
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Independent oracle: plain filter/sort/slice over the enumerated rows. */
function oracle(rows: Row[], spec: QuerySpec): Row[] {
  let out = rows.filter((row) =>
    (spec.filters ?? []).every((f) => {
      const v = row[f.column];
      switch (f.op) {
        case "=": return v === f.value;
        case "!=": return v !== f.value;
        case "<": return v !== null && (v as Scalar) < (f.value as Scalar);
        case "<=": return v !== null && (v as Scalar) <= (f.value as Scalar);
        case ">": return v !== null && (v as Scalar) > (f.value as Scalar);
        case ">=": return v !== null && (v as Scalar) >= (f.value as Scalar);
        case "between": {
          const [lo, hi] = f.value as Scalar[];
          return v !== null && (v as Scalar) >= lo && (v as Scalar) <= hi;
        }
        case "in": return (f.value as Scalar[]).includes(v as Scalar);
      }
    }),
  );
  out = [...out].sort((a, b) => {
    for (const term of spec.orderBy ?? []) {
      const av = a[term.column] as Scalar;
      const bv = b[term.column] as Scalar;
      if (av !== bv) return (av < bv ? -1 : 1) * (term.desc ? -1 : 1);
    }
    return 0;
  });
  if (spec.limit !== undefined) out = out.slice(0, spec.limit);
  return out.map((row) => {
    const projected: Row = {};
    for (const name of spec.columns ?? Object.keys(row)) projected[name] = row[name];
    return projected;
  });
}

describe("randomized spec equivalence", () => {
  const plans: {
    table: string;
    numeric: string[];
    textual: string[];
    key: string[];
  }[] = [
    {
      table: "blocks",
      numeric: ["blockNum", "timestamp", "witnessId", "transactionCount"],
      textual: ["witnessAddress"],
      key: ["blockNum"],
    },
    {
      table: "transactions",
      numeric: ["blockNum", "transactionIndex", "feeLimit", "fee", "energyUsage"],
      textual: ["contractType"],
      key: ["blockNum", "transactionIndex"],
    },
    {
      table: "events",
      numeric: ["blockNum", "logIndex"],
      textual: ["address"],
      key: ["blockNum", "transactionHash", "logIndex"],
    },
  ];

  it("fetch equals in-memory filtering on 20 random QuerySpecs", () => {
    const rand = mulberry32(1234);
    const pick = <T>(arr: T[]): T => arr[Math.floor(rand() * arr.length)];

    for (let i = 0; i < 20; i++) {
      const plan = pick(plans);
      const rows = readTable(SINK_DIR, plan.table, registry);
      const sampleValue = (column: string): Scalar =>
        pick(rows)[column] as Scalar;

      const filters: QuerySpec["filters"] = [];
      const filterCount = Math.floor(rand() * 3);
      for (let f = 0; f < filterCount; f++) {
        const numeric = rand() < 0.7;
        const column = numeric ? pick(plan.numeric) : pick(plan.textual);
        const roll = rand();
        if (numeric && roll < 0.3) {
          const a = sampleValue(column) as number;
          const b = sampleValue(column) as number;
          filters.push({ column, op: "between", value: [Math.min(a, b), Math.max(a, b)] });
        } else if (roll < 0.5) {
          filters.push({
            column,
            op: "in",
            value: [sampleValue(column), sampleValue(column), sampleValue(column)],
          });
        } else {
          filters.push({
            column,
            op: pick(["=", "!=", "<", "<=", ">", ">="]),
            value: sampleValue(column),
          });
        }
      }

      const spec: QuerySpec = {
        table: plan.table,
        columns: rand() < 0.5 ? undefined : [...plan.key, pick(plan.numeric)].filter(
          (v, idx, arr) => arr.indexOf(v) === idx,
        ),
        filters,
        // order by the primary key so expected row order is total
        orderBy: plan.key.map((column) => ({ column, desc: rand() < 0.3 })),
        limit: rand() < 0.4 ? 1 + Math.floor(rand() * 20) : undefined,
      };

      const got = frameToRows(store.fetch(spec));
      const want = oracle(rows, spec).map((row) => {
        if (!spec.columns) return row;
        const projected: Row = {};
        for (const name of spec.columns) projected[name] = row[name];
        return projected;
      });
      expect(got, JSON.stringify(spec)).toEqual(want);
    }
  });
});
