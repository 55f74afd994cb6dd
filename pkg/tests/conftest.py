import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(__file__))
os.environ.setdefault("JORDANLAB_CACHE", tempfile.mkdtemp(prefix="jordanlab-cache-"))
