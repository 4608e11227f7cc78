"""TRON blockchain ETL: extract raw chain messages, flatten them into
row-oriented tables, load them idempotently into a columnar store, and
compute on-chain aggregates."""

__version__ = "0.1.0"
