"""Source polling, record mapping and template-driven metadata generation."""

from .config import ConfigError, PipelineConfig, SourcePipeline, config_from_dict, load_config
from .mapping import (
    Assignment,
    Entity,
    InvalidRecord,
    MappingError,
    MappingSpec,
    MissingSourcePath,
    apply_mapping,
    get_path,
    parse_record,
)
from .pipeline import PipelineRunSummary, SourceCounts, run_loop, run_once, run_source
from .source import FetchError, SourceConfig, fetch_records, should_fetch
from .template import (
    Constant,
    Context,
    Extract,
    GenerationContext,
    MetadataTemplate,
    TemplateError,
    dataset_uuid,
    generate_metadata,
)

__all__ = [
    "ConfigError", "PipelineConfig", "SourcePipeline", "config_from_dict", "load_config", "Assignment",
    "Entity", "InvalidRecord", "MappingError", "MappingSpec", "MissingSourcePath", "apply_mapping",
    "get_path", "parse_record", "PipelineRunSummary", "SourceCounts", "run_loop", "run_once",
    "run_source", "FetchError", "SourceConfig", "fetch_records", "should_fetch", "Constant", "Context",
    "Extract", "GenerationContext", "MetadataTemplate", "TemplateError", "dataset_uuid",
    "generate_metadata",
]
