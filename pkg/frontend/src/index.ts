export {
  ColumnDef,
  SchemaManifest,
  SchemaRegistry,
  TableDef,
  UnknownColumn,
  UnknownTable,
} from "./manifest";
export {
  AddressError,
  addressBase58ToHex,
  addressHexToBase58,
  isoToMs,
} from "./convert";
export {
  BuiltQuery,
  Filter,
  FilterOp,
  FilterTypeError,
  InvalidSpec,
  QuerySpec,
  buildQuery,
  normalizeSpec,
} from "./query";
export { Row, readTable } from "./segments";
export { ResultFrame, frameFromRows, frameToRows, framesEqual } from "./frame";
export { FetchOptions, LocalStore } from "./fetch";
export { ExportFormat, UnsupportedFormat, exportFrame, importFrame } from "./export";
