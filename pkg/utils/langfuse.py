import logging
import os
from datetime import datetime

logger = logging.getLogger(__name__)

_REQUIRED_ENV = ("LANGFUSE_PUBLIC_KEY", "LANGFUSE_SECRET_KEY")


def get_langfuse_client():
    """
    Return a Langfuse client configured from the LANGFUSE_* environment variables.

    Returns:
    - Langfuse client instance, or None when the keys are missing or the
      langfuse package is not installed
    """
    missing = [name for name in _REQUIRED_ENV if not os.environ.get(name)]
    if missing:
        logger.warning("Langfuse disabled, missing %s", ", ".join(missing))
        return None
    try:
        from langfuse import get_client
    except ImportError:
        logger.warning("Langfuse disabled, package not installed")
        return None
    return get_client()


def _timestamped(name):
    return f"{datetime.now().strftime('%Y%m%d_%H%M%S')}_{name}"


def publish_eval_result(result, name, metadata=None, client=None):
    """
    Record one evaluation run as a trace with one score per metric.

    Parameters:
    - result (dict): output of eval_result_to_dict
    - name (str): run name, prefixed with a timestamp
    - metadata (dict, optional): model path, dataset, weights and so on

    Returns:
    - bool: True when the trace was sent
    """
    langfuse = client or get_langfuse_client()
    if langfuse is None:
        return False

    scores = {f"p_at_{k}": value for k, value in result["p_at"].items()}
    scores["mrr"] = result["mrr"]
    scores["undetected"] = result.get("undetected", 0)

    with langfuse.start_as_current_span(name=_timestamped(name)) as span:
        span.update_trace(
            input=metadata or {},
            output={key: result[key] for key in ("n_samples", "p_at", "mrr", "by_generator", "by_distance")},
            metadata=metadata or {},
        )
        for score_name, value in scores.items():
            span.score_trace(name=score_name, value=float(value))
    langfuse.flush()
    logger.info("published evaluation %s scores=%d", name, len(scores))
    return True


def publish_sweep(rows, name, client=None):
    """
    Record a weight sweep as one trace; every row becomes a p_at_1 score
    commented with its weights.

    Parameters:
    - rows (list): SweepRow objects
    - name (str): run name, prefixed with a timestamp

    Returns:
    - bool: True when the trace was sent
    """
    langfuse = client or get_langfuse_client()
    if langfuse is None:
        return False

    with langfuse.start_as_current_span(name=_timestamped(name)) as span:
        span.update_trace(metadata={"rows": len(rows)})
        for row in rows:
            if row.status != "ok":
                continue
            span.score_trace(
                name=f"p_at_1_{row.panel}",
                value=float(row.p_at_1),
                comment=f"w1={row.w1:g} w2={row.w2:g} w3={row.w3:g}",
            )
    langfuse.flush()
    logger.info("published sweep %s rows=%d", name, len(rows))
    return True
