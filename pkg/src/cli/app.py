"""
Komut satırı arayüzü - argparse, loglama ve alt komut yönlendirme
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from .commands import COMMANDS
from ..core.exceptions import DidprError
from ..utils.config_manager import ConfigManager
from ..utils.constants import COMMAND_DEFAULTS, DEFAULT_SETTINGS, LP_BACKENDS

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _add_seed(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, help="RNG tohumu (yoksa DIDPR_SEED)")


def _add_dpa(parser: argparse.ArgumentParser):
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--delta-in", dest="delta_in", type=float)
    parser.add_argument("--delta-out", dest="delta_out", type=float)
    parser.add_argument("--edges", type=int, help="üretilecek kenar sayısı (tohum kenarı hariç)")


def build_parser() -> argparse.ArgumentParser:
    """Alt komutlu ayrıştırıcı"""
    parser = argparse.ArgumentParser(
        prog="didpr",
        description="Yönlü ağ üretimi, assortativity sınırları ve DiDPR yeniden bağlama",
    )
    parser.add_argument("--config", help="JSON config dosyası (ör. effective_config.json)")
    parser.add_argument("--output-dir", dest="output_dir", help="çıktı dizini")
    parser.add_argument("--lp-backend", dest="lp_backend", choices=LP_BACKENDS)
    parser.add_argument("--jobs", type=int, help="paralel iş sayısı")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="DEBUG loglama")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="yalnızca uyarılar")
    sub = parser.add_subparsers(dest="command")

    generate = sub.add_parser("generate", help="ER veya DPA ağı üret")
    generate.add_argument("model", nargs="?", choices=("er", "dpa"))
    generate.add_argument("--n", type=int)
    generate.add_argument("--p", type=float)
    _add_dpa(generate)
    generate.add_argument("--fit", help="fit komutunun yazdığı EV JSON dosyası (dpa)")
    generate.add_argument("--replicates", type=int)
    generate.add_argument("--output")
    generate.add_argument("--degrees", action="store_true", default=None,
                          help="çıkış / giriş derece pmf CSV'si de yaz")
    _add_seed(generate)

    assort = sub.add_parser("assort", help="dört assortativity katsayısı")
    assort.add_argument("graph", nargs="?")
    assort.add_argument("--output")

    bounds = sub.add_parser("bounds", help="koşullu assortativity sınırları")
    bounds.add_argument("graphs", nargs="*")
    bounds.add_argument("--order", nargs=4, metavar="PAIR", help="ör. 11 12 21 22")
    bounds.add_argument("--condition-pair", dest="condition_pair")
    bounds.add_argument("--condition-values", dest="condition_values", nargs="+", type=float)
    bounds.add_argument("--output")

    solve_eta = sub.add_parser("solve-eta", help="hedef profil için η")
    solve_eta.add_argument("graph", nargs="?")
    solve_eta.add_argument("--targets", nargs=4, type=float, metavar=("R11", "R12", "R21", "R22"))
    solve_eta.add_argument("--no-interior", dest="interior", action="store_false", default=None)
    solve_eta.add_argument("--output")

    rewire = sub.add_parser("rewire", help="DiDPR yeniden bağlama")
    rewire.add_argument("graphs", nargs="*")
    rewire.add_argument("--targets", nargs=4, type=float, metavar=("R11", "R12", "R21", "R22"))
    rewire.add_argument("--eta", help="hazır η CSV'si")
    rewire.add_argument("--max-steps", dest="max_steps", type=int)
    rewire.add_argument("--checkpoint-every", dest="checkpoint_every", type=int)
    rewire.add_argument("--tolerance", type=float)
    rewire.add_argument("--stop-early", dest="stop_early", action="store_true", default=None)
    rewire.add_argument("--incremental", action="store_true", default=None)
    rewire.add_argument("--no-interior", dest="interior", action="store_false", default=None)
    rewire.add_argument("--replicates", type=int)
    _add_seed(rewire)

    fit = sub.add_parser("fit", help="DPA parametrelerinin EV tahmini")
    fit.add_argument("graph", nargs="?")
    fit.add_argument("--n-tail", dest="n_tail", type=int)
    fit.add_argument("--grid-points", dest="grid_points", type=int)
    fit.add_argument("--sim-edges", dest="sim_edges", type=int)
    fit.add_argument("--output")
    _add_seed(fit)

    gains = sub.add_parser("scenario-gains", help="senaryo çiftlerine göre r artışı")
    _add_dpa(gains)
    gains.add_argument("--targets", nargs=4, type=float, metavar=("R11", "R12", "R21", "R22"))
    gains.add_argument("--max-steps", dest="max_steps", type=int)
    gains.add_argument("--tolerance", type=float, help="erken durma toleransı")
    gains.add_argument("--no-stop-early", dest="stop_early", action="store_false", default=None)
    gains.add_argument("--replicates", type=int)
    gains.add_argument("--output")
    _add_seed(gains)

    aggregate = sub.add_parser("aggregate", help="iz CSV'lerinin ortalaması")
    aggregate.add_argument("traces", nargs="*")
    aggregate.add_argument("--output")

    degrees = sub.add_parser("degrees", help="derece dağılımları (pmf)")
    degrees.add_argument("graphs", nargs="*")
    degrees.add_argument("--output")

    history = sub.add_parser("history", help="çıktı dizininin çalışma geçmişi")
    history.add_argument("--entry", help="tek kayıt kimliği")
    history.add_argument("--only", help="yalnızca bu komutun kayıtları")
    history.add_argument("--clear", action="store_true", default=None)

    return parser


def setup_logging(level: str, verbose: bool = False, quiet: bool = False):
    """Kök logger'ı stderr'e yapılandır"""
    if verbose:
        level = "DEBUG"
    elif quiet:
        level = "WARNING"
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format=LOG_FORMAT,
                        stream=sys.stderr, force=True)


def _overrides(args: argparse.Namespace) -> dict:
    schema = set(DEFAULT_SETTINGS) | set(COMMAND_DEFAULTS[args.command])
    return {
        key: value for key, value in vars(args).items()
        if key in schema and value is not None and value != []
    }


def main(argv: Optional[List[str]] = None) -> int:
    """Ana fonksiyon"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help(sys.stderr)
        return 2

    setup_logging(DEFAULT_SETTINGS["log_level"], args.verbose, args.quiet)
    try:
        manager = ConfigManager()
        file_config = manager.load_config(args.config)
        config = manager.build_run_config(args.command, file_config, _overrides(args))
        setup_logging(config["log_level"], args.verbose, args.quiet)
        logger.debug("Etkin config: %s", config)
        summary = COMMANDS[args.command](config)
    except DidprError as e:
        print(f"Hata: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"Hata: {e}", file=sys.stderr)
        return 1

    print(json.dumps(summary, indent=2, ensure_ascii=False, default=str))
    return 0
