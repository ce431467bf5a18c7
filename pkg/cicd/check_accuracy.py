#!/usr/bin/env python3
"""
Accuracy Check Module

Reads the results JSON written by `ctxspell eval --output` and fails the build
when Precision@1 or Precision@10 is under its threshold.
"""

import sys
import json
from typing import Dict, Any


def load_accuracy_results(results_file: str = 'evaluation_results.json') -> Dict[str, Any]:
    """
    Load evaluation results from JSON file.

    Args:
        results_file: Path to the evaluation results JSON file

    Returns:
        Dictionary containing the evaluation results
    """
    try:
        with open(results_file, 'r') as f:
            results = json.load(f)
        return results
    except FileNotFoundError:
        print(f'✗ ERROR: {results_file} not found')
        sys.exit(1)
    except json.JSONDecodeError as e:
        print(f'✗ ERROR: Invalid JSON in {results_file}: {e}')
        sys.exit(1)


def _precision(results: Dict[str, Any], k: int) -> float:
    return float(results.get('p_at', {}).get(str(k), 0.0))


def print_accuracy_summary(results: Dict[str, Any]) -> None:
    """
    Print a formatted summary of evaluation results.

    Args:
        results: Dictionary containing evaluation results
    """
    print(f"Samples evaluated: {results['n_samples']}")
    print('Precision@k: ' + ', '.join(f"P@{k}={float(v):.2f}" for k, v in results['p_at'].items()))
    print(f"MRR: {float(results['mrr']):.2f}")
    print(f"Undetected planted errors: {results.get('undetected', 0)}")

    for title, key in (('By generator', 'by_generator'), ('By edit distance', 'by_distance')):
        breakdown = results.get(key) or {}
        if not breakdown:
            continue
        print(f'\n{title}:')
        for name, summary in breakdown.items():
            p1 = float(summary['p_at'].get('1', 0.0))
            print(f"  {name}: n={summary['n_samples']} P@1={p1:.2f} MRR={float(summary['mrr']):.2f}")


def check_accuracy_thresholds(results: Dict[str, Any], min_p1: float = 60.0, min_p10: float = 90.0) -> bool:
    """
    Check P@1 and P@10 (percentages) against their thresholds.

    Returns:
        True if both meet their threshold, False otherwise
    """
    passed = True
    for k, threshold in ((1, min_p1), (10, min_p10)):
        value = _precision(results, k)
        if value >= threshold:
            print(f'✓ PASSED: P@{k} {value:.2f}% meets {threshold:.2f}%')
        else:
            print(f'✗ FAILED: P@{k} {value:.2f}% is below {threshold:.2f}%')
            passed = False
    return passed


def main(results_file: str = 'evaluation_results.json', min_p1: float = 60.0, min_p10: float = 90.0) -> int:
    """
    Returns:
        Exit code: 0 for success, 1 for failure
    """
    results = load_accuracy_results(results_file)
    print_accuracy_summary(results)
    print()
    passed = check_accuracy_thresholds(results, min_p1, min_p10)
    return 0 if passed else 1


if __name__ == '__main__':
    import argparse

    parser = argparse.ArgumentParser(description='Check spell checker evaluation results against accuracy thresholds')
    parser.add_argument('--results-file', '-f',
                        default='evaluation_results.json',
                        help='Path to evaluation results JSON file (default: evaluation_results.json)')
    parser.add_argument('--min-p1', type=float, default=60.0,
                        help='Minimum acceptable P@1 percentage (default: 60)')
    parser.add_argument('--min-p10', type=float, default=90.0,
                        help='Minimum acceptable P@10 percentage (default: 90)')

    args = parser.parse_args()
    sys.exit(main(args.results_file, args.min_p1, args.min_p10))
