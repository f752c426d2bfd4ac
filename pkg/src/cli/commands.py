"""
Alt komutlar - her biri etkin config'i alır, çıktıları yazar ve özet döndürür
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from ..core.assortativity import AssortProfile, EdgeMixMatrix, assortativity_of_graph, support_indices
from ..core.eta_solver import EtaProblem, Unattainable, coefficient_bounds, solve_target_eta
from ..core.ev_fit import fit_ev, load_ev_fit
from ..core.exceptions import ConfigError, DegenerateDistributionError, DidprError, GraphError
from ..core.export_manager import ExportManager, aggregate_traces, degree_rows, load_eta
from ..core.generators import DpaParams, gen_dpa, gen_er
from ..core.graph import DirectedGraph, degree_pair_dist, load_edge_list
from ..core.history_manager import HistoryManager
from ..core.rewiring import RewiringConfig, ScenarioGains, rewire
from ..utils.config_manager import ConfigManager
from ..utils.constants import TYPE_PAIRS

logger = logging.getLogger(__name__)


def _parse_pair(text: str) -> Tuple[int, int]:
    pair = tuple(int(c) for c in str(text).strip().lstrip("r"))
    if pair not in TYPE_PAIRS:
        raise ConfigError(f"coefficient pair must be one of 11, 12, 21, 22, got {text!r}")
    return pair


def _replicate_name(filename: str, index: int, count: int) -> str:
    if count == 1:
        return filename
    path = Path(filename)
    return str(path.with_name(f"{path.stem}_{index:03d}{path.suffix}"))


def _child_seeds(seed: int, count: int) -> List[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(count)


def _fan_out(func: Callable, tasks: Sequence, jobs: int, desc: str) -> List:
    """Bağımsız görevleri sırayı koruyarak çalıştır"""
    show = len(tasks) > 1
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            return list(tqdm(executor.map(func, tasks), total=len(tasks), desc=desc, disable=not show))
    return [func(task) for task in tqdm(tasks, desc=desc, disable=not show)]


def _profile_or_none(g: DirectedGraph) -> Optional[Dict[str, float]]:
    try:
        return assortativity_of_graph(g).as_dict()
    except (DegenerateDistributionError, GraphError):
        return None


def _finish(config: dict, outputs: List[str], summary: dict) -> dict:
    """Etkin config ve geçmiş kaydı"""
    manager = ConfigManager()
    outputs = list(outputs) + [manager.save_config(config, config["output_dir"])]
    HistoryManager(config["output_dir"]).add_entry(config["command"], config.get("seed"), outputs, summary)
    return {"command": config["command"], "seed": config.get("seed"), **summary, "outputs": outputs}


def _require(config: dict, key: str):
    if not config.get(key):
        raise ConfigError(f"{config['command']} requires {key}")
    return config[key]


def _targets(config: dict) -> Optional[AssortProfile]:
    values = config.get("targets")
    return AssortProfile.from_values(values) if values else None


def _unattainable_error(problem: EtaProblem, backend: str) -> DidprError:
    """Hedefler sağlanamıyorsa koşulsuz sınırlarla birlikte hata"""
    bounds = coefficient_bounds(EtaProblem(problem.nu), backend=backend)
    guidance = ", ".join(f"r{a}{b} in [{lo:.4f}, {hi:.4f}]" for (a, b), (lo, hi) in bounds.bounds.items())
    return DidprError(f"target assortativity coefficients unattainable; unconditional bounds: {guidance}")


def _solve_eta(g: DirectedGraph, targets: AssortProfile, backend: str, interior: bool) -> EdgeMixMatrix:
    problem = EtaProblem.from_graph(g, targets)
    result = solve_target_eta(problem, backend, interior)
    if isinstance(result, Unattainable):
        raise _unattainable_error(problem, backend)
    return result


def _verify_degrees(before: DirectedGraph, after: DirectedGraph):
    same = (
        np.array_equal(np.sort(before.out_deg), np.sort(after.out_deg))
        and np.array_equal(np.sort(before.in_deg), np.sort(after.in_deg))
        and degree_pair_dist(before).counts == degree_pair_dist(after).counts
        and after.degrees_consistent()
    )
    if not same:
        raise DidprError("degree sequences changed during rewiring")


# --- generate ---------------------------------------------------------------

def _dpa_params(config: dict) -> DpaParams:
    """Açık α/β/γ/δ değerleri ya da fit JSON'u"""
    if config["fit"]:
        if any(config[key] is not None for key in ("alpha", "beta", "gamma")):
            raise ConfigError("fit cannot be combined with alpha, beta or gamma")
        params = load_ev_fit(config["fit"]).to_params(config["edges"])
        logger.info("DPA parametreleri %s dosyasından: %s", config["fit"], params)
        return params
    return DpaParams.resolve(config["alpha"], config["beta"], config["gamma"],
                             delta_in=config["delta_in"], delta_out=config["delta_out"],
                             target_edges=config["edges"])


def _generate_task(task: tuple) -> dict:
    config, params, index, child, filename = task
    g = gen_er(config["n"], config["p"], child) if params is None else gen_dpa(params, child)
    written = ExportManager(config["output_dir"]).export_graph(g, filename)
    result = {"replicate": index, "path": written[0], "files": written,
              "nodes": g.num_nodes, "edges": g.num_edges, "profile": _profile_or_none(g)}
    if config["degrees"]:
        result["degrees"] = degree_rows(g, index, written[0])
    return result


def cmd_generate(config: dict) -> dict:
    """ER veya DPA ağı üret"""
    if config["model"] not in ("er", "dpa"):
        raise ConfigError("model must be 'er' or 'dpa'")
    if config["fit"] and config["model"] != "dpa":
        raise ConfigError("fit requires the dpa model")
    params = _dpa_params(config) if config["model"] == "dpa" else None
    count = config["replicates"]
    tasks = [(config, params, i, child, _replicate_name(config["output"], i, count))
             for i, child in enumerate(_child_seeds(config["seed"], count))]
    graphs = _fan_out(_generate_task, tasks, config["jobs"], "generate")
    outputs = [path for result in graphs for path in result.pop("files")]
    summary = {"graphs": graphs}
    if config["degrees"]:
        rows = [row for result in graphs for row in result.pop("degrees")]
        output = Path(config["output"])
        name = str(output.with_name(f"{output.stem}_degrees.csv"))
        outputs.append(ExportManager(config["output_dir"]).export_degrees(rows, name))
    if params is not None:
        summary["params"] = asdict(params)
    return _finish(config, outputs, summary)


# --- assort -----------------------------------------------------------------

def cmd_assort(config: dict) -> dict:
    """Grafın dört assortativity katsayısı"""
    path = _require(config, "graph")
    g = load_edge_list(path)
    profile = assortativity_of_graph(g)
    summary = {"graph": path, "nodes": g.num_nodes, "edges": g.num_edges, "profile": profile.as_dict()}
    output = ExportManager(config["output_dir"]).export_json(summary, config["output"])
    return _finish(config, [output], summary)


# --- bounds -----------------------------------------------------------------

def _bounds_task(task: tuple) -> List[dict]:
    replicate, path, order, pair, value, backend = task
    problem = EtaProblem.from_graph(load_edge_list(path))
    intervals = [] if pair is None else [(pair, value, value)]
    bounds = coefficient_bounds(problem, order, intervals, backend)
    label = "" if pair is None else f"{pair[0]}{pair[1]}"
    condition = {"replicate": replicate, "conditioned_pair": label,
                 "conditioned_value": np.nan if value is None else value}
    return [{**condition, **row} for row in bounds.as_rows()]


def cmd_bounds(config: dict) -> dict:
    """Sıralı koşullu assortativity sınırları"""
    graphs = _require(config, "graphs")
    order = [_parse_pair(p) for p in config["order"]]
    pair = _parse_pair(config["condition_pair"]) if config["condition_pair"] else None
    values = config["condition_values"]
    if pair is not None and not values:
        raise ConfigError("condition_pair requires condition_values")
    if pair is None and values:
        raise ConfigError("condition_values require condition_pair")
    if pair is not None:
        # koşullanan çift sıranın başına alınır
        order = [pair] + [p for p in order if p != pair]

    tasks = [(replicate, path, order, pair, value, config["lp_backend"])
             for replicate, path in enumerate(graphs)
             for value in (values if pair is not None else [None])]
    rows = [row for result in _fan_out(_bounds_task, tasks, config["jobs"], "bounds") for row in result]
    output = ExportManager(config["output_dir"]).export_bounds(rows, config["output"])
    summary = {"graphs": len(graphs), "rows": len(rows)}
    return _finish(config, [output], summary)


# --- solve-eta --------------------------------------------------------------

def cmd_solve_eta(config: dict) -> dict:
    """Hedef profil için η"""
    path = _require(config, "graph")
    targets = _targets(config)
    if targets is None:
        raise ConfigError("solve-eta requires targets")
    g = load_edge_list(path)
    eta = _solve_eta(g, targets, config["lp_backend"], config["interior"])
    output = ExportManager(config["output_dir"]).export_eta(eta, config["output"])
    summary = {"graph": path, "targets": targets.as_dict(), "support": list(eta.H.shape),
               "positive_entries": int((eta.H > 0).sum())}
    return _finish(config, [output], summary)


# --- rewire -----------------------------------------------------------------

def _rewire_task(task: tuple) -> dict:
    config, path, eta, targets, run, child = task
    g = load_edge_list(path)
    cfg = RewiringConfig(
        max_steps=config["max_steps"], checkpoint_every=config["checkpoint_every"],
        tolerance=config["tolerance"], stop_early=config["stop_early"], seed=child,
        incremental=config["incremental"], targets=targets,
    )
    rewired, trace = rewire(g, eta, cfg)
    _verify_degrees(g, rewired)

    exporter = ExportManager(config["output_dir"])
    stem = Path(path).stem
    outputs = exporter.export_graph(rewired, f"{stem}_rewired_{run:03d}.txt")
    outputs.append(exporter.export_trace(trace, f"{stem}_trace_{run:03d}.csv"))
    result = {
        "graph": path, "run": run, "steps": trace.final.step,
        "initial": trace.checkpoints[0].profile.as_dict(), "final": trace.final.profile.as_dict(),
        "targets": targets.as_dict() if targets else None,
        "acc_rate": float(np.mean([c.acc_rate for c in trace.checkpoints[1:]])) if len(trace) > 1 else 0.0,
        "seed": config["seed"],
    }
    outputs.append(exporter.export_report({**result, "command": "rewire", "outputs": list(outputs)},
                                          f"{stem}_report_{run:03d}.md"))
    result["outputs"] = outputs
    return result


def cmd_rewire(config: dict) -> dict:
    """DiDPR yeniden bağlama"""
    graphs = _require(config, "graphs")
    targets = _targets(config)
    if targets is None and not config["eta"]:
        raise ConfigError("rewire requires targets or an eta CSV")
    shared_eta = load_eta(config["eta"]) if config["eta"] else None

    tasks = []
    seeds = iter(_child_seeds(config["seed"], len(graphs) * config["replicates"]))
    for path in graphs:
        g = load_edge_list(path)
        if shared_eta is not None:
            support_indices(g, shared_eta)
            eta = shared_eta
        else:
            eta = _solve_eta(g, targets, config["lp_backend"], config["interior"])
        for run in range(config["replicates"]):
            tasks.append((config, path, eta, targets, run, next(seeds)))

    runs = _fan_out(_rewire_task, tasks, config["jobs"], "rewire")
    outputs = [path for result in runs for path in result.pop("outputs")]
    return _finish(config, outputs, {"runs": runs})


# --- fit --------------------------------------------------------------------

def cmd_fit(config: dict) -> dict:
    """DPA parametrelerinin EV tahmini"""
    path = _require(config, "graph")
    fit = fit_ev(load_edge_list(path), config["n_tail"], config["grid_points"],
                 config["sim_edges"], config["seed"])
    output = ExportManager(config["output_dir"]).export_json(fit.to_dict(), config["output"])
    return _finish(config, [output], {"graph": path, "fit": fit.to_dict()})


# --- scenario-gains ---------------------------------------------------------

def _gains_task(task: tuple) -> dict:
    config, replicate, child = task
    generate_seed, rewire_seed = child.spawn(2)
    params = DpaParams.resolve(config["alpha"], config["beta"], config["gamma"],
                               delta_in=config["delta_in"], delta_out=config["delta_out"],
                               target_edges=config["edges"])
    g = gen_dpa(params, generate_seed)
    targets = AssortProfile.from_values(config["targets"])
    eta = _solve_eta(g, targets, config["lp_backend"], True)
    gains = ScenarioGains()
    # etiketler kenar indeksine bağlıdır; zincir karıştıkça senaryo yapısını kaybeder
    cfg = RewiringConfig(max_steps=config["max_steps"], tolerance=config["tolerance"],
                         stop_early=config["stop_early"], seed=rewire_seed, targets=targets)
    _, trace = rewire(g, eta, cfg, gains)

    change = np.array(trace.final.profile.as_list()) - np.array(trace.checkpoints[0].profile.as_list())
    drift = float(np.abs(gains.total() - change).max())
    if drift > 1e-9:
        raise DidprError(f"scenario gains do not add up to the total change (drift {drift:.2e})")
    rows = [{"replicate": replicate, **row} for row in gains.to_rows()]
    leaders = [gains.leader(c) for c in range(4)]
    return {"rows": rows, "leaders": leaders, "steps": trace.final.step}


def cmd_scenario_gains(config: dict) -> dict:
    """Senaryo çiftlerine göre assortativity artışı"""
    if len(config["targets"]) != 4:
        raise ConfigError("scenario-gains requires four targets")
    tasks = [(config, i, child) for i, child in enumerate(_child_seeds(config["seed"], config["replicates"]))]
    results = _fan_out(_gains_task, tasks, config["jobs"], "scenario-gains")
    rows = [row for result in results for row in result["rows"]]
    output = ExportManager(config["output_dir"]).export_gains(rows, config["output"])
    leaders = [result["leaders"] for result in results]
    summary = {
        "replicates": len(results),
        "leaders": leaders,
        "steps": [result["steps"] for result in results],
        "alpha_gamma_leads_all": sum(all(b == "alpha-gamma" for b in lead) for lead in leaders),
    }
    return _finish(config, [output], summary)


# --- aggregate --------------------------------------------------------------

def cmd_aggregate(config: dict) -> dict:
    """İz CSV'lerinin adım başına ortalaması"""
    traces = _require(config, "traces")
    frame = aggregate_traces(traces)
    output = ExportManager(config["output_dir"]).export_table(frame, config["output"])
    return _finish(config, [output], {"traces": len(traces), "steps": int(len(frame))})


# --- degrees ----------------------------------------------------------------

def cmd_degrees(config: dict) -> dict:
    """Kenar listelerinin çıkış / giriş derece dağılımları"""
    graphs = _require(config, "graphs")
    rows = [row for replicate, path in enumerate(graphs)
            for row in degree_rows(load_edge_list(path), replicate, path)]
    output = ExportManager(config["output_dir"]).export_degrees(rows, config["output"])
    return _finish(config, [output], {"graphs": len(graphs), "rows": len(rows)})


# --- history ----------------------------------------------------------------

def cmd_history(config: dict) -> dict:
    """Çıktı dizininin çalışma geçmişi; geçmişe kendisi yazılmaz"""
    history = HistoryManager(config["output_dir"])
    if config["clear"]:
        removed = history.get_statistics()["total_entries"]
        history.clear_history()
        logger.info("Geçmiş temizlendi: %d kayıt", removed)
        return {"command": "history", "cleared": removed}
    if config["entry"]:
        entry = history.get_entry(config["entry"])
        if entry is None:
            raise DidprError(f"no history entry {config['entry']!r} in {config['output_dir']}")
        return {"command": "history", "entry": entry}
    entries = history.filter_by_command(config["only"]) if config["only"] else history.get_all_entries()
    return {"command": "history", "statistics": history.get_statistics(), "entries": entries}


COMMANDS: Dict[str, Callable[[dict], dict]] = {
    "generate": cmd_generate,
    "assort": cmd_assort,
    "bounds": cmd_bounds,
    "solve-eta": cmd_solve_eta,
    "rewire": cmd_rewire,
    "fit": cmd_fit,
    "scenario-gains": cmd_scenario_gains,
    "aggregate": cmd_aggregate,
    "degrees": cmd_degrees,
    "history": cmd_history,
}
