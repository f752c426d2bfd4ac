"""
Hata sınıfları - tüm core modüllerinin ortak hiyerarşisi
"""
from typing import Optional


class DidprError(Exception):
    """Tüm toolkit hatalarının tabanı"""


class GraphError(DidprError, ValueError):
    """Graf yapısı veya indeks hatası"""


class EdgeListParseError(GraphError):
    """Kenar listesi okuma hatası (satır numarası ile)"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class DegenerateDistributionError(DidprError):
    """Standart sapması sıfır olan uç dağılımı"""

    def __init__(self, message: str = "degenerate end distribution; assortativity undefined"):
        super().__init__(message)


class SupportMismatchError(DidprError):
    """Graf ve eta destek kümeleri uyuşmuyor"""


class LpError(DidprError):
    """Doğrusal program hatası"""


class LpStallError(LpError):
    """İterasyon sınırı aşıldı"""

    def __init__(self, message: str = "cycling/stall"):
        super().__init__(message)


class UnattainableIntervalsError(DidprError):
    """Koşullandırma aralıkları birlikte sağlanamıyor"""

    def __init__(self, message: str = "conditioning intervals unattainable"):
        super().__init__(message)


class GeneratorError(DidprError, ValueError):
    """Rastgele ağ üretici parametre hatası"""


class EstimationError(DidprError):
    """Kuyruk / EV tahmin hatası"""


class ConfigError(DidprError, ValueError):
    """Ayar doğrulama hatası"""
