"""Dataset files, fit documents and graph export."""

from .export import edge_frame, export_edges, export_factor_graph, factor_graph
from .loader import load_dataset, read_schema, write_csv, write_dataset
from .serialization import dump_fit, load_fit, load_sampling_spec, parse_fit, save_fit

__all__ = [
    "dump_fit",
    "edge_frame",
    "export_edges",
    "export_factor_graph",
    "factor_graph",
    "load_dataset",
    "load_fit",
    "load_sampling_spec",
    "parse_fit",
    "read_schema",
    "save_fit",
    "write_csv",
    "write_dataset",
]
