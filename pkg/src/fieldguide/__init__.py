"""fieldguide: observation assessment pipeline.

An attention-based image captioner acts as an expert observer; learner
captions are scored against the generated caption with sentence-embedding
cosine similarity, and a thresholded feedback engine plus REST service
deliver results live to the teacher dashboard.
"""

__version__ = "0.1.0"
