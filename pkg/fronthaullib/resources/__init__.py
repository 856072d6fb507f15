# Copyright (c) 2024, fronthaullib contributors
#
# Permission to use, copy, modify, and/or distribute this software for any
# purpose with or without fee is hereby granted, provided that the above
# copyright notice and this permission notice appear in all copies.
#
# THE SOFTWARE IS PROVIDED "AS IS" AND THE AUTHOR DISCLAIMS ALL WARRANTIES
# WITH REGARD TO THIS SOFTWARE INCLUDING ALL IMPLIED WARRANTIES OF
# MERCHANTABILITY AND FITNESS. IN NO EVENT SHALL THE AUTHOR BE LIABLE FOR
# ANY SPECIAL, DIRECT, INDIRECT, OR CONSEQUENTIAL DAMAGES OR ANY DAMAGES
# WHATSOEVER RESULTING FROM LOSS OF USE, DATA OR PROFITS, WHETHER IN AN
# ACTION OF CONTRACT, NEGLIGENCE OR OTHER TORTIOUS ACTION, ARISING OUT OF
# OR IN CONNECTION WITH THE USE OR PERFORMANCE OF THIS SOFTWARE.

from .fronthaul import FronthaulRate  # noqa
from .fronthaul import fronthaul_rate_bound  # noqa
from .memory import GB  # noqa
from .memory import KB  # noqa
from .memory import MB  # noqa
from .memory import MemoryModel  # noqa
from .memory import MemoryScheme  # noqa
from .memory import bits_per_vector  # noqa
from .memory import create_memory_model  # noqa
from .memory import parse_capacity  # noqa
from .memory import parse_memory_model  # noqa
from .plan import ResourcePlan  # noqa
from .plan import build_plan  # noqa
from .topology import Topology  # noqa
from .topology import TopologyKind  # noqa
from .topology import build_topology  # noqa
from .topology import stored_vectors  # noqa
