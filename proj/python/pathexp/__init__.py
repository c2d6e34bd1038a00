"""Path-explosive episode detection, scoring and co-explosion analysis.

The heavy lifting lives in the compiled extension ``pathexp._core``; this
package re-exports its public surface.
"""

from pathexp._core import *  # noqa: F401,F403
from pathexp._core import __doc__ as _core_doc

__doc__ = _core_doc
