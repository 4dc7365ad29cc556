"""Python interface to the idebench benchmarking core.

The native module exchanges structured values as JSON text; this
wrapper exposes the same operations with plain dicts and lists.
"""

import json as _json

try:
    from ._idebench import (  # type: ignore
        IdebenchError,
        compute_metrics as _compute_metrics,
        dataset_schema as _dataset_schema,
        detailed_csv as _detailed_csv,
        generate_workflow as _generate_workflow,
        ground_truth as _ground_truth,
        make_demo_seed,
        query as _query,
        run_benchmark as _run_benchmark,
        scale_dataset,
        validate_workflow as _validate_workflow,
        write_reports as _write_reports,
    )
except ImportError:  # pragma: no cover - in-build-tree layout
    from _idebench import (  # type: ignore
        IdebenchError,
        compute_metrics as _compute_metrics,
        dataset_schema as _dataset_schema,
        detailed_csv as _detailed_csv,
        generate_workflow as _generate_workflow,
        ground_truth as _ground_truth,
        make_demo_seed,
        query as _query,
        run_benchmark as _run_benchmark,
        scale_dataset,
        validate_workflow as _validate_workflow,
        write_reports as _write_reports,
    )

__all__ = [
    "IdebenchError",
    "compute_metrics",
    "dataset_schema",
    "detailed_csv",
    "generate_workflow",
    "ground_truth",
    "make_demo_seed",
    "query",
    "run_benchmark",
    "scale_dataset",
    "validate_workflow",
    "write_reports",
]


def dataset_schema(dataset_path):
    """Schema (domains, category frequencies) of a CSV file or star dir."""
    return _json.loads(_dataset_schema(dataset_path))


def generate_workflow(schema, type="mixed", interactions=20, rng_seed=42, name=""):
    """Generate one exploration workflow as a dict."""
    return _json.loads(
        _generate_workflow(_json.dumps(schema), type, interactions, rng_seed, name)
    )


def validate_workflow(workflow, schema):
    """List of (interaction index, message); -1 flags topology-level issues."""
    return _validate_workflow(_json.dumps(workflow), _json.dumps(schema))


def run_benchmark(
    adapter,
    dataset,
    workflows,
    time_requirements=(0.5, 1, 3, 5, 10),
    think_time=1.0,
    confidence=0.95,
    pool_size=8,
):
    """Replay workflows (dicts) against an adapter; returns the suite outcome."""
    return _json.loads(
        _run_benchmark(
            adapter,
            dataset,
            [_json.dumps(w) for w in workflows],
            list(time_requirements),
            think_time,
            confidence,
            pool_size,
        )
    )


def query(adapter, dataset, viz, filter=None, budget_s=10.0, confidence=0.95):
    """One-shot visualization query; returns {status, error, result}."""
    return _json.loads(
        _query(
            adapter,
            dataset,
            _json.dumps(viz),
            "" if filter is None else _json.dumps(filter),
            budget_s,
            confidence,
        )
    )


def ground_truth(dataset, viz, filter=None):
    """Exact result table for a visualization query."""
    return _json.loads(
        _ground_truth(dataset, _json.dumps(viz), "" if filter is None else _json.dumps(filter))
    )


def compute_metrics(delivered, truth):
    """Quality metrics of a delivered result table against ground truth."""
    return _json.loads(_compute_metrics(_json.dumps(delivered), _json.dumps(truth)))


def detailed_csv(records):
    """Render benchmark records (list of dicts) as the detailed CSV."""
    return _detailed_csv(_json.dumps(records))


def write_reports(records, out_dir):
    """Write detailed.csv, summary.json, summary.svg for the records."""
    _write_reports(_json.dumps(records), out_dir)
