import argparse
import json
import logging
import os
import sys

# Add parent directory to path to import from top-level packages
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from ctxspell.error_synthesis import load_dataset
from ctxspell.eval_harness import eval_result_to_dict, evaluate_synthetic, sweep_weights, write_sweep_csv
from ctxspell.language_profile import load_profile
from ctxspell.ngram_model import load_model
from ctxspell.ranker import Weights
from ctxspell.suggester import build_delete_index
from utils.langfuse import publish_eval_result, publish_sweep


def _banner(title):
    print(f"\n{'='*80}")
    print(title)
    print(f"{'='*80}\n")


def _resolve(path, base):
    return path if os.path.isabs(path) else os.path.join(base, path)


def main(argv=None):
    parser = argparse.ArgumentParser(description="N-gram weight sweep runner")
    parser.add_argument(
        "--config",
        default=os.path.join(os.path.dirname(__file__), 'sweep_config.json'),
        help="sweep configuration JSON (default: sweep_config.json next to this script)",
    )
    parser.add_argument("--output-dir", default=".", help="where sweep CSVs are written")
    parser.add_argument("--log-level", default=os.environ.get("LOG_LEVEL", "INFO"))
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    with open(args.config, 'r') as f:
        config = json.load(f)
    base = os.path.join(os.path.dirname(os.path.abspath(args.config)), '..')

    pinned = float(config.get('pinned', 1.0))
    k_max = int(config.get('k_max', 10))
    grid = config['grid']
    publish = bool(config.get('langfuse', False))

    results = {}
    loaded = []

    # Phase 1: load models and datasets
    _banner("PHASE 1: LOADING MODELS AND DATASETS")
    for run in config['runs']:
        name = run['name']
        try:
            profile = load_profile(_resolve(run['profile'], base))
            model = load_model(_resolve(run['model'], base))
            dataset = load_dataset(_resolve(run['dataset'], base))
            index = build_delete_index(model, run.get('max_edit_distance', 2))
            loaded.append((name, profile, model, index, dataset))
            results[name] = {'status': 'loaded', 'words': len(model), 'records': len(dataset)}
            print(f"✓ Loaded {name}: {len(model)} words, {len(dataset)} records\n")
        except Exception as e:
            results[name] = {'status': 'error', 'error': str(e)}
            print(f"✗ Error loading {name}: {str(e)}\n")

    # Phase 2: sweep
    _banner("PHASE 2: RUNNING SWEEPS")
    for name, profile, model, index, dataset in loaded:
        print(f"Sweeping {name} ({len(dataset)} records)")
        try:
            sweep = sweep_weights(model, index, profile, dataset, grid, pinned=pinned, k_max=k_max)
            csv_path = os.path.join(args.output_dir, f"sweep_{name}.csv")
            write_sweep_csv(sweep.rows, csv_path)
            results[name]['sweep_csv'] = csv_path
            results[name]['rows'] = len(sweep.rows)
            results[name]['failed_rows'] = sum(1 for r in sweep.rows if r.status != 'ok')
            if sweep.best is not None:
                results[name]['best'] = {'w1': sweep.best.w1, 'w2': sweep.best.w2, 'w3': sweep.best.w3,
                                         'p_at_1': sweep.best.p_at_1}
            if publish:
                publish_sweep(sweep.rows, f"sweep_{name}")
            results[name]['status'] = 'swept'
            print(f"✓ Swept {name}: {len(sweep.rows)} rows -> {csv_path}\n")
        except Exception as e:
            results[name]['status'] = 'error'
            results[name]['error'] = str(e)
            print(f"✗ Error sweeping {name}: {str(e)}\n")

    # Phase 3: full evaluation at the best weights
    _banner("PHASE 3: EVALUATING BEST WEIGHTS")
    for name, profile, model, index, dataset in loaded:
        best = results[name].get('best')
        if best is None:
            continue
        try:
            weights = Weights(best['w1'], best['w2'], best['w3'])
            result = evaluate_synthetic(model, index, profile, dataset, weights, k_max)
            results[name]['eval'] = eval_result_to_dict(result)
            if publish:
                publish_eval_result(results[name]['eval'], f"best_{name}", metadata=best)
            results[name]['status'] = 'success'
            print(f"✓ {name}: P@1={result.p_at[1]:.2f} MRR={result.mrr:.2f}\n")
        except Exception as e:
            results[name]['status'] = 'error'
            results[name]['error'] = str(e)
            print(f"✗ Error evaluating {name}: {str(e)}\n")

    _banner("FINAL RESULTS SUMMARY")
    print(json.dumps(results, indent=2, default=str))

    successful = sum(1 for r in results.values() if r['status'] == 'success')
    failed = sum(1 for r in results.values() if r['status'] == 'error')
    print(f"\n{'='*80}")
    print(f"Total runs: {len(results)}")
    print(f"Successful: {successful}")
    print(f"Failed: {failed}")
    print(f"{'='*80}\n")

    return results


if __name__ == "__main__":
    main()
