from meshcsg.config.config import Config, MetaManager, DEFAULT_YAMLS_PATH
from meshcsg.config.pipeline_manager import PipelineManager
from meshcsg.config.csg_manager import CsgManager
from meshcsg.config.report_manager import ReportManager
