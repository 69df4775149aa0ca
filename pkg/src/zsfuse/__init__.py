"""zsfuse: zero-shot late fusion engine for speech emotion recognition."""

from .embedio import EmbeddingTable, read_embeddings, write_embeddings
from .fusion import FusedVector, fuse, fuse_none, layer_norm
from .labels import EmotionLabel, LabelSet
from .manifest import (DatasetManifest, SplitAssignment, UtteranceRecord,
                       load_provided_partitions, loso_folds,
                       speaker_disjoint_split)
from .metrics import AggregateResult, aggregate, random_baseline, uar
from .prompts import PromptMatrix, PromptSpec, build_prompt_matrix, render_prompt
from .synth import SyntheticWorldConfig, synth_world
from .training import HeadModel, TrainConfig, TrainRecord, train
from .zeroshot import (ScoreMatrix, ZeroShotVector, cosine, ensemble,
                       score_matrix, zero_shot_predict)

__version__ = "0.1.0"
