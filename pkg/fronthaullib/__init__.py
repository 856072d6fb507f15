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

__version__ = '0.1.0'

from fronthaullib.experiment import ExperimentSpec  # noqa: E402
from fronthaullib.experiment import SEReport  # noqa: E402
from fronthaullib.experiment import run_experiment  # noqa: E402
from fronthaullib.report import emit_report  # noqa: E402
from fronthaullib.scenario import ScenarioConfig  # noqa: E402
from fronthaullib.specLoader import SpecLoader  # noqa: E402
from fronthaullib.specLoader import figure_preset  # noqa: E402

__all__ = [
    'ExperimentSpec',
    'SEReport',
    'ScenarioConfig',
    'SpecLoader',
    'emit_report',
    'figure_preset',
    'run_experiment',
]
