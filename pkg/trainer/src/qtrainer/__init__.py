"""Toy sequence-to-sequence learner for (state triple, program) corpora.

File-based contract with the generation pipeline: corpora come in as
JSON-lines token records, candidates go out as .code text files.
"""

from .model import ModelConfig, Seq2Seq, PAD, SOS, EOS
from .data import Corpus, load_corpus, load_vocab
from .train import TrainConfig, train, load_checkpoint, initial_loss
from .sample import sample_candidates, detokenize

__version__ = "0.1.0"
