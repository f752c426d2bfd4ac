"""
Export modülü - kenar listesi, η, iz, sınır ve kazanç CSV'leri, JSON ve rapor
"""
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import pandas as pd

from .assortativity import EdgeMixMatrix
from .exceptions import DidprError
from .generators import save_scenarios
from .graph import DirectedGraph, degree_distribution, save_edge_list
from .rewiring import RewiringTrace

logger = logging.getLogger(__name__)

ETA_COLUMNS = ["i", "j", "k", "l", "eta"]
TRACE_COLUMNS = ["step", "r11", "r12", "r21", "r22", "acc_rate"]
BOUNDS_COLUMNS = ["replicate", "conditioned_pair", "conditioned_value", "pair", "lower", "upper"]
GAINS_COLUMNS = ["replicate", "bucket", "accepted", "d_r11", "d_r12", "d_r21", "d_r22"]
DEGREE_COLUMNS = ["replicate", "graph", "degree", "out_pmf", "in_pmf"]
SIDECAR_SUFFIX = ".scenarios"


class ExportManager:
    """Export yönetim sınıfı"""

    def __init__(self, export_dir: str = "data/runs"):
        self.export_dir = Path(export_dir)
        self.export_dir.mkdir(parents=True, exist_ok=True)

    def path(self, filename: str) -> Path:
        """Göreli adlar çıktı dizinine yerleşir"""
        filepath = Path(filename)
        return filepath if filepath.is_absolute() else self.export_dir / filepath

    def export_graph(self, g: DirectedGraph, filename: str) -> List[str]:
        """Kenar listesi (+ DPA için senaryo yan dosyası)"""
        filepath = self.path(filename)
        written = [save_edge_list(g, str(filepath))]
        if g.has_scenarios:
            written.append(save_scenarios(g, str(filepath) + SIDECAR_SUFFIX))
        return written

    def export_eta(self, eta: EdgeMixMatrix, filename: str) -> str:
        """η'nın pozitif hücreleri: i, j, k, l, eta"""
        return self._write_csv(pd.DataFrame(eta.to_rows(), columns=ETA_COLUMNS), filename)

    def export_trace(self, trace: RewiringTrace, filename: str) -> str:
        return self._write_csv(pd.DataFrame(trace.to_rows(), columns=TRACE_COLUMNS), filename)

    def export_bounds(self, rows: Iterable[Dict], filename: str) -> str:
        return self._write_csv(pd.DataFrame(list(rows), columns=BOUNDS_COLUMNS), filename)

    def export_gains(self, rows: Iterable[Dict], filename: str) -> str:
        return self._write_csv(pd.DataFrame(list(rows), columns=GAINS_COLUMNS), filename)

    def export_degrees(self, rows: Iterable[Dict], filename: str) -> str:
        return self._write_csv(pd.DataFrame(list(rows), columns=DEGREE_COLUMNS), filename)

    def export_table(self, frame: pd.DataFrame, filename: str) -> str:
        return self._write_csv(frame, filename)

    def export_json(self, data: Dict, filename: str) -> str:
        filepath = self.path(filename)
        filepath.parent.mkdir(parents=True, exist_ok=True)
        with open(filepath, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, ensure_ascii=False)
        return str(filepath)

    def export_report(self, entry: Dict, filename: Optional[str] = None,
                      format_type: str = "markdown") -> str:
        """Çalışma raporu (Markdown veya düz metin)"""
        if not filename:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            filename = f"report_{timestamp}.{'md' if format_type == 'markdown' else 'txt'}"
        filepath = self.path(filename)
        filepath.parent.mkdir(parents=True, exist_ok=True)
        with open(filepath, "w", encoding="utf-8") as f:
            f.write(self._format_entry(entry, format_type))
        return str(filepath)

    def _write_csv(self, frame: pd.DataFrame, filename: str) -> str:
        filepath = self.path(filename)
        filepath.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(filepath, index=False)
        logger.debug("CSV yazıldı: %s (%d satır)", filepath, len(frame))
        return str(filepath)

    @staticmethod
    def _profile_line(profile: Optional[Dict]) -> str:
        if not profile:
            return "-"
        return ", ".join(f"{key}={value:.4f}" for key, value in profile.items())

    def _format_entry(self, entry: Dict, format_type: str = "markdown") -> str:
        """Entry'yi formatla"""
        lines = []
        fields = [
            ("Komut", entry.get("command", "Bilinmiyor")),
            ("Tarih", entry.get("timestamp", datetime.now().isoformat())),
            ("Tohum", entry.get("seed", "-")),
            ("Graf", entry.get("graph", "-")),
            ("Adım", entry.get("steps", "-")),
            ("Ortalama kabul oranı", entry.get("acc_rate", "-")),
        ]
        profiles = [
            ("Başlangıç profili", entry.get("initial")),
            ("Hedefler", entry.get("targets")),
            ("Son profil", entry.get("final")),
        ]

        if format_type == "markdown":
            lines.append("# Yeniden Bağlama Raporu\n")
            for label, value in fields:
                lines.append(f"**{label}:** {value}  ")
            lines.append("\n## Assortativity\n")
            lines.append("| | r11 | r12 | r21 | r22 |")
            lines.append("|---|---|---|---|---|")
            for label, profile in profiles:
                if profile:
                    cells = " | ".join(f"{profile[key]:.4f}" for key in ("r11", "r12", "r21", "r22"))
                    lines.append(f"| {label} | {cells} |")
            outputs = entry.get("outputs", [])
            if outputs:
                lines.append("\n## Çıktılar\n")
                for output in outputs:
                    lines.append(f"- {output}")
        else:
            lines.append("=" * 60)
            lines.append("YENİDEN BAĞLAMA RAPORU")
            lines.append("=" * 60)
            for label, value in fields:
                lines.append(f"{label}: {value}")
            lines.append("-" * 60)
            for label, profile in profiles:
                lines.append(f"{label}: {self._profile_line(profile)}")
            outputs = entry.get("outputs", [])
            if outputs:
                lines.append("-" * 60)
                lines.append("ÇIKTILAR:")
                for output in outputs:
                    lines.append(f"  • {output}")

        return "\n".join(lines) + "\n"


def load_eta(path: str) -> EdgeMixMatrix:
    """i, j, k, l, eta sütunlu CSV'den η"""
    frame = pd.read_csv(path)
    missing = [c for c in ETA_COLUMNS if c not in frame.columns]
    if missing:
        raise DidprError(f"eta CSV {path} lacks columns {missing}")
    rows = frame[ETA_COLUMNS].itertuples(index=False, name=None)
    return EdgeMixMatrix.from_rows(rows)


def aggregate_traces(paths: Sequence[str]) -> pd.DataFrame:
    """Replikasyon izlerinin adım başına ortalaması; n = katkı veren iz sayısı"""
    if not paths:
        raise DidprError("aggregate requires at least one trace CSV")
    frames = []
    for path in paths:
        frame = pd.read_csv(path)
        missing = [c for c in TRACE_COLUMNS if c not in frame.columns]
        if missing:
            raise DidprError(f"trace CSV {path} lacks columns {missing}")
        frames.append(frame[TRACE_COLUMNS])
    combined = pd.concat(frames, ignore_index=True)
    grouped = combined.groupby("step", sort=True)
    result = grouped[TRACE_COLUMNS[1:]].mean()
    result["n"] = grouped.size()
    return result.reset_index()


def degree_rows(g: DirectedGraph, replicate: int, graph: str) -> List[Dict]:
    """Çıkış / giriş derece pmf'leri, 0'dan en büyük dereceye kadar"""
    degrees, out_pmf, in_pmf = degree_distribution(g)
    return [
        {"replicate": replicate, "graph": graph, "degree": int(k), "out_pmf": float(p), "in_pmf": float(q)}
        for k, p, q in zip(degrees, out_pmf, in_pmf)
    ]
