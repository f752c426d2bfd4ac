"""
Geçmiş yönetimi - çıktı dizini başına JSON tabanlı çalışma kaydı
"""
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

logger = logging.getLogger(__name__)


class HistoryManager:
    """Geçmiş yönetim sınıfı"""

    def __init__(self, history_dir: str = "data/runs"):
        self.history_dir = Path(history_dir)
        self.history_dir.mkdir(parents=True, exist_ok=True)
        self.history_file = self.history_dir / "history.json"
        self._load_history()

    def _load_history(self):
        """Geçmişi yükle"""
        self.history: List[Dict] = []
        if self.history_file.exists():
            try:
                with open(self.history_file, "r", encoding="utf-8") as f:
                    self.history = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                logger.warning("Geçmiş yükleme hatası: %s", e)

    def _save_history(self):
        """Geçmişi kaydet"""
        try:
            with open(self.history_file, "w", encoding="utf-8") as f:
                json.dump(self.history, f, indent=2, ensure_ascii=False)
        except OSError as e:
            logger.warning("Geçmiş kaydetme hatası: %s", e)

    def add_entry(self, command: str, seed: Optional[int], outputs: List[str] = None,
                  summary: Dict = None) -> str:
        """Yeni kayıt ekle"""
        entry = {
            "id": f"{datetime.now().strftime('%Y%m%d%H%M%S')}_{len(self.history)}",
            "timestamp": datetime.now().isoformat(),
            "command": command,
            "seed": seed,
            "outputs": outputs or [],
            "summary": summary or {},
        }
        self.history.append(entry)
        self._save_history()
        return entry["id"]

    def get_entry(self, entry_id: str) -> Optional[Dict]:
        """Kayıt al"""
        for entry in self.history:
            if entry.get("id") == entry_id:
                return entry
        return None

    def get_all_entries(self) -> List[Dict]:
        """Tüm kayıtları al"""
        return self.history.copy()

    def filter_by_command(self, command: str) -> List[Dict]:
        """Komuta göre filtrele"""
        return [entry for entry in self.history if entry.get("command") == command]

    def clear_history(self):
        """Tüm geçmişi temizle"""
        self.history = []
        self._save_history()

    def get_statistics(self) -> Dict:
        """İstatistikler"""
        commands = sorted({entry.get("command", "Unknown") for entry in self.history})
        return {
            "total_entries": len(self.history),
            "commands_used": commands,
            "total_outputs": sum(len(entry.get("outputs", [])) for entry in self.history),
        }
