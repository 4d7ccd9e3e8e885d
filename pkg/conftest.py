import os
import sys

# Add the repository root to the path so tests import basics, TN, ordering and reduction directly
sys.path.append(os.path.dirname(os.path.abspath(__file__)))
