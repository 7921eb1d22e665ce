from .backends import BackendHandle, CountingBackend, GenerationParams, RemoteBackend
from .pipeline import (
    ANSWERED,
    CLARIFICATION_NEEDED,
    CLARIFY,
    DEFAULT_CLARIFICATION,
    FAILED,
    RESOLVED,
    AnswerOutcome,
    Pipeline,
    RouterConfig,
    RoutingOutcome,
    TraceEntry,
    answer,
    build_stage1_prompt,
    build_stage2_prompt,
    generate_command,
    recognize_api_id,
)
from .rule import RuleBackend
from .templates import (
    STYLE_FINETUNE_SIMPLE,
    STYLE_GENERATION_DETAILED,
    UNRESOLVABLE,
    PromptTemplate,
    default_template,
)

__all__ = [
    "ANSWERED",
    "CLARIFICATION_NEEDED",
    "CLARIFY",
    "DEFAULT_CLARIFICATION",
    "FAILED",
    "RESOLVED",
    "STYLE_FINETUNE_SIMPLE",
    "STYLE_GENERATION_DETAILED",
    "UNRESOLVABLE",
    "AnswerOutcome",
    "BackendHandle",
    "CountingBackend",
    "GenerationParams",
    "Pipeline",
    "PromptTemplate",
    "RemoteBackend",
    "RouterConfig",
    "RoutingOutcome",
    "RuleBackend",
    "TraceEntry",
    "answer",
    "build_stage1_prompt",
    "build_stage2_prompt",
    "default_template",
    "generate_command",
    "recognize_api_id",
]
