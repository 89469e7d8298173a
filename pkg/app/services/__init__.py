from .analysis_service import AnalysisService
from .bench_service import BenchService
from .encoding_service import EncodingService
from .instance_service import InstanceService
from .qubo_service import QuboService
from .sip_service import SipService

__all__ = [
	"AnalysisService",
	"BenchService",
	"EncodingService",
	"InstanceService",
	"QuboService",
	"SipService",
]
