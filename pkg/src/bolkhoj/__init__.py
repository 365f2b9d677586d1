"""bolkhoj: spoken-Hindi web search at desk scale.

Romanized Hindi queries (typed, or audio decoded by monophone Gaussian
HMMs) are morphologically analysed, transferred to English through a
bilingual lexicon with feature unification, reduced to keywords, run
against a local TF-IDF index, and answered with numbered hyperlinks and
a templated Hindi answer line inside a confirm/repeat dialog session.
"""

from .audio import AudioClip, FeatureConfig, FeatureSequence, extract_features, load_wav
from .hmm import Hmm, TrainConfig, baum_welch, forward_loglik, sample, viterbi
from .resources import ResourceBundle, load_default_resources, load_resources, pronounce
from .search import Query, build_query, drop_stop_words, index_corpus, search
from .transfer import translate_hi_to_en

__version__ = "0.1.0"

__all__ = [
    "AudioClip", "FeatureConfig", "FeatureSequence", "extract_features", "load_wav",
    "Hmm", "TrainConfig", "baum_welch", "forward_loglik", "sample", "viterbi",
    "ResourceBundle", "load_default_resources", "load_resources", "pronounce",
    "Query", "build_query", "drop_stop_words", "index_corpus", "search",
    "translate_hi_to_en",
    "__version__",
]
