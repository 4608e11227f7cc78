/**
 * Schema manifest: the JSON document emitted by `tronetl schema emit
 * --format manifest`, the single source of truth for table and column
 * definitions on this side of the language boundary.
 */

import { readFileSync } from "node:fs";

export interface ColumnDef {
  name: string;
  /** semantic type: u64 | u32 | i32 | amount | hash | address | hex | text | bool | array(...) */
  type: string;
  nullable: boolean;
}

export interface TableDef {
  name: string;
  columns: ColumnDef[];
  primaryKey: string[];
}

export interface SchemaManifest {
  version: number;
  tables: TableDef[];
}

export class UnknownTable extends Error {}
export class UnknownColumn extends Error {}

export class SchemaRegistry {
  private byName = new Map<string, TableDef>();

  constructor(manifest: SchemaManifest) {
    if (manifest.version !== 1) {
      throw new Error(`unsupported manifest version ${manifest.version}`);
    }
    for (const table of manifest.tables) {
      this.byName.set(table.name, table);
    }
  }

  static fromFile(path: string): SchemaRegistry {
    return new SchemaRegistry(JSON.parse(readFileSync(path, "utf-8")));
  }

  tableNames(): string[] {
    return [...this.byName.keys()].sort();
  }

  table(name: string): TableDef {
    const def = this.byName.get(name);
    if (!def) throw new UnknownTable(`unknown table ${JSON.stringify(name)}`);
    return def;
  }

  column(tableName: string, columnName: string): ColumnDef {
    const def = this.table(tableName).columns.find((c) => c.name === columnName);
    if (!def) {
      throw new UnknownColumn(
        `table ${tableName} has no column ${JSON.stringify(columnName)}`,
      );
    }
    return def;
  }
}

export function isArrayType(type: string): boolean {
  return type.startsWith("array(");
}

export function isNumericType(type: string): boolean {
  return ["u64", "u32", "i32", "amount"].includes(type);
}
