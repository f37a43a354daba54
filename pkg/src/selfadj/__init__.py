"""Self-adjusting heaps (pairing, multipass, slim, smooth) with link/cut instrumentation."""

from .core import (BOTTOM, AlreadyRootError, Arena, BottomKeyError, ConsumedHeapError,
                   CutRecord, EmptyHeapError, ExtKey, HeapError, ItemId, KeyIncreaseError,
                   LinkRecord, NotARootError, SelfMeldError, Side, StaleHandleError)
from .heap import Heap, LazyHeap, make_heap
from .metrics import GrowthFit, Metrics, amortized_summary, fit_growth
from .trace import (MixConfig, ReplayResult, Trace, gen_random_trace, gen_sorting_trace,
                    parse_trace, replay, serialize_trace)
from .variants import (Placement, Variant, locally_max_consolidate, multipass_consolidate,
                       two_pass_consolidate)

__all__ = [
    "BOTTOM", "AlreadyRootError", "Arena", "BottomKeyError", "ConsumedHeapError", "CutRecord",
    "EmptyHeapError", "ExtKey", "HeapError", "ItemId", "KeyIncreaseError", "LinkRecord",
    "NotARootError", "SelfMeldError", "Side", "StaleHandleError", "Heap", "LazyHeap",
    "make_heap", "GrowthFit", "Metrics", "amortized_summary", "fit_growth", "MixConfig",
    "ReplayResult", "Trace", "gen_random_trace", "gen_sorting_trace", "parse_trace", "replay",
    "serialize_trace", "Placement", "Variant", "locally_max_consolidate",
    "multipass_consolidate", "two_pass_consolidate",
]
