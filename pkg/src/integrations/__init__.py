from .config import Settings, load_settings
from .sequence_io import SequenceFormatError, read_rule, read_sequence, write_frame, write_sequence
