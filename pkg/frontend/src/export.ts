/**
 * Frame export / import: csv and json-lines, both round-trippable given
 * the column definitions. In csv, array cells are JSON-encoded and null
 * cells are empty; json-lines preserves types natively.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { ColumnDef, isArrayType, isNumericType } from "./manifest";
import { frameFromRows, frameToRows, ResultFrame } from "./frame";
import { Row } from "./segments";

export type ExportFormat = "csv" | "json-lines";

export class UnsupportedFormat extends Error {}

function csvEscape(cell: string): string {
  if (/[",\n\r]/.test(cell)) return `"${cell.replace(/"/g, '""')}"`;
  return cell;
}

function csvCell(value: unknown, col: ColumnDef): string {
  if (value === null || value === undefined) return "";
  if (isArrayType(col.type)) return csvEscape(JSON.stringify(value));
  return csvEscape(String(value));
}

function parseCsv(text: string): string[][] {
  const rows: string[][] = [];
  let row: string[] = [];
  let cell = "";
  let quoted = false;
  for (let i = 0; i < text.length; i++) {
    const ch = text[i];
    if (quoted) {
      if (ch === '"') {
        if (text[i + 1] === '"') {
          cell += '"';
          i++;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      row.push(cell);
      cell = "";
    } else if (ch === "\n") {
      row.push(cell);
      rows.push(row);
      row = [];
      cell = "";
    } else if (ch !== "\r") {
      cell += ch;
    }
  }
  if (cell !== "" || row.length) {
    row.push(cell);
    rows.push(row);
  }
  return rows;
}

function cellToValue(cell: string, col: ColumnDef): unknown {
  if (cell === "" && col.nullable) return null;
  if (isArrayType(col.type)) return cell === "" ? [] : JSON.parse(cell);
  if (isNumericType(col.type)) return cell === "" ? 0 : Number(cell);
  if (col.type === "bool") return cell === "true";
  return cell;
}

export function exportFrame(frame: ResultFrame, format: ExportFormat, path: string): void {
  if (format === "csv") {
    const lines = [frame.columns.map((c) => csvEscape(c.name)).join(",")];
    for (const row of frameToRows(frame)) {
      lines.push(frame.columns.map((c) => csvCell(row[c.name], c)).join(","));
    }
    writeFileSync(path, lines.join("\n") + "\n");
    return;
  }
  if (format === "json-lines") {
    const lines = frameToRows(frame).map((row) => JSON.stringify(row));
    writeFileSync(path, lines.length ? lines.join("\n") + "\n" : "");
    return;
  }
  throw new UnsupportedFormat(String(format));
}

export function importFrame(
  path: string,
  format: ExportFormat,
  columns: ColumnDef[],
): ResultFrame {
  const text = readFileSync(path, "utf-8");
  if (format === "csv") {
    const table = parseCsv(text);
    if (table.length === 0) throw new UnsupportedFormat("csv file has no header");
    const header = table[0];
    const rows: Row[] = table.slice(1).map((cells) => {
      const row: Row = {};
      header.forEach((name, i) => {
        const col = columns.find((c) => c.name === name);
        if (!col) throw new UnsupportedFormat(`csv column ${name} not in schema`);
        row[name] = cellToValue(cells[i] ?? "", col);
      });
      return row;
    });
    const ordered = header.map((name) => columns.find((c) => c.name === name)!);
    return frameFromRows(ordered, rows);
  }
  if (format === "json-lines") {
    const rows = text
      .split("\n")
      .filter((line) => line.trim() !== "")
      .map((line) => JSON.parse(line) as Row);
    return frameFromRows(columns, rows);
  }
  throw new UnsupportedFormat(String(format));
}
