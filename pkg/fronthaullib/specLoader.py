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

import copy
import logging
import os
import sys
from collections import OrderedDict
from pathlib import Path
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Union

import oyaml
import yaml
from yaml.error import MarkedYAMLError
from yaml.error import YAMLError

from fronthaullib.compression import CompressionOption
from fronthaullib.exceptions import InvalidConfigurationException
from fronthaullib.exceptions import SpecLoaderException
from fronthaullib.exceptions import SpecNotFoundException
from fronthaullib.exceptions import UnknownPresetException
from fronthaullib.experiment import DEFAULT_TRIALS
from fronthaullib.experiment import SCENARIO_FIELDS
from fronthaullib.experiment import ExperimentSpec
from fronthaullib.experiment import FigurePreset
from fronthaullib.experiment import SweepAxis
from fronthaullib.experiment import desk_scale
from fronthaullib.resources import TopologyKind
from fronthaullib.resources import parse_memory_model
from fronthaullib.scenario import ScenarioConfig

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)

if not len(logger.handlers):
    handler = logging.StreamHandler(sys.stdout)
    handler.setLevel(logging.DEBUG)
    logger.addHandler(handler)

PRESET_DIR = Path(__file__).parent / 'assets' / 'presets'

# short names accepted next to the full field names
ALIASES = {
    'L': 'num_aps',
    'M': 'total_antennas',
    'K': 'num_users',
    'N_sc': 'num_subcarriers',
    'p': 'tx_power',
    'sigma2': 'noise_power',
    'D': 'area_side',
    'B': 'bandwidth',
    'tau_p': 'pilot_length',
    'trials': 'trials',
    'num_trials': 'trials',
    'seed': 'seed',
    'base_seed': 'seed',
    'memory': 'memory',
    'memory_models': 'memory',
    'option': 'options',
    'options': 'options',
    'topology': 'topologies',
    'topologies': 'topologies',
    'sweep': 'sweep_param',
    'sweep_param': 'sweep_param',
    'values': 'sweep_values',
    'sweep_values': 'sweep_values',
    'name': 'name',
    'combining_width': 'combining_width',
    'rho': 'combining_width',
}

TOP_LEVEL_KEYS = ('name', 'preset', 'scenario', 'sweep', 'variants', 'memory', 'options', 'topologies', 'trials',
                  'seed', 'combining_width')

FLOAT_FIELDS = ('tx_power', 'noise_power', 'area_side', 'bandwidth', 'prelog', 'pilot_power')

INT_FIELDS = ('num_aps', 'total_antennas', 'num_users', 'num_subcarriers', 'pilot_length', 'rng_seed')

OPTIONAL_FIELDS = ('pilot_length', 'pilot_power')


def _as_list(value: Any) -> list:
    if value is None:
        return list()

    if isinstance(value, (list, tuple)):
        return list(value)

    if isinstance(value, str) and ',' in value:
        return [v.strip() for v in value.split(',') if v.strip()]

    return [value]


def _coerce_scenario(scenario: dict) -> dict:
    """
    YAML reads 1e-3 as a string, so float fields are converted explicitly
    """
    coerced = OrderedDict(scenario)
    for name in FLOAT_FIELDS:
        if isinstance(coerced.get(name), str):
            try:
                coerced[name] = float(coerced[name])

            except ValueError:
                # left for _check_field_type to report
                pass

    return coerced


def _check_field_type(name: str, value: Any, line: Optional[int], field: str) -> None:
    """
    Raises a SpecLoaderException pointing at the key when a scenario value has the wrong type
    """
    if value is None and name in OPTIONAL_FIELDS:
        return

    if name in INT_FIELDS:
        valid = isinstance(value, int) and not isinstance(value, bool)
        expected = 'an integer'

    elif name in FLOAT_FIELDS:
        valid = isinstance(value, (int, float)) and not isinstance(value, bool)
        expected = 'a number'

    else:
        return

    if not valid:
        raise SpecLoaderException(f'{name} must be {expected}, got {value!r}', line=line, field=field)


def _key_lines(path: Path, text: str) -> Dict[str, int]:
    """
    Line number of every mapping key in the document, keyed by its dotted path
    """
    lines = dict()

    def walk(node, prefix):
        if isinstance(node, yaml.MappingNode):
            for key_node, value_node in node.value:
                key = f'{prefix}{key_node.value}'
                lines[key] = key_node.start_mark.line + 1
                walk(value_node, f'{key}.')

    try:
        walk(yaml.compose(text, Loader=yaml.SafeLoader), '')

    except YAMLError:
        logger.debug(f'Could not compose {path} for line numbers')

    return lines


class SpecLoader:
    """
    SpecLoader finds and loads experiment specs from their YAML definition files, and builds the figure presets
    shipped with the package.

    :param path: local path to search for all spec files
    """

    # list of errors encountered while loading all specs
    spec_errors = list()

    # list of directories to skip and not recurse into
    skip_dirs = ['.git', '.venv', 'venv', '.idea', '.tox', '.eggs', 'build']

    def __init__(self, path: Union[str, Path, None] = None):

        self.specs = list()
        self.spec_errors = list()

        debug = os.environ.get('FRONTHAUL_DEBUG', False)

        if debug:
            logger.setLevel(logging.DEBUG)
            logger.debug('Debugging output enabled')

        if path is not None:
            self.load_all_specs_from_dir(path)

    def load_spec_dict_from_path(self, spec_path: Union[str, Path]) -> dict:
        """
        Loads a spec file into a normalized spec dictionary

        :param spec_path: path to a spec file, or a directory holding exactly one
        :return: spec dictionary
        """
        return self._parse_spec(spec_path)

    def load_spec_from_path(self, spec_path: Union[str, Path], overrides: Optional[List[str]] = None) -> ExperimentSpec:
        """
        Returns an ExperimentSpec from the given path

        :param spec_path: path to a spec file, or a directory holding one
        :param overrides: list of 'key=value' overrides applied after the file
        :return: ExperimentSpec
        """
        spec_dict = self._parse_spec(spec_path)
        if overrides:
            spec_dict = self.apply_overrides(spec_dict, overrides)

        return self.create_spec(spec_dict)

    def load_all_specs_from_dir(self, directory: Union[str, Path]) -> List[ExperimentSpec]:
        """
        Loads every spec file found below the directory; files that fail to load are recorded in spec_errors

        :param directory: directory to search
        :return: list of ExperimentSpec
        """
        directory = Path(directory)
        for spec_file in sorted(self._check_dir(directory, list())):
            try:
                self.specs.append(self.load_spec_from_path(spec_file))

            except (SpecLoaderException, InvalidConfigurationException) as err:
                self.spec_errors.append({'path': str(spec_file.absolute()), 'error': str(err)})
                logger.warning(f'Loader Error for {spec_file.absolute()} - {err}')

        return self.specs

    def _check_dir(self, directory: Path, found: list) -> list:
        if directory.name in self.skip_dirs or not directory.is_dir():
            return found

        found.extend(directory.glob('*.spec.y*ml'))
        for child in directory.iterdir():
            if child.is_dir():
                self._check_dir(child, found)

        return found

    def get_spec_with_name(self, spec_name: str) -> Optional[ExperimentSpec]:
        for spec in self.specs:
            if spec.name == spec_name:
                return spec

        return None

    def _parse_spec(self, path: Union[str, Path]) -> dict:
        """
        Parses a spec file and returns a normalized spec dictionary

        :param path: file, or directory containing a single *.spec.yaml
        :return: spec dictionary
        """
        path_obj = Path(path)

        if path_obj.is_dir():
            found_files = sorted(path_obj.glob('*.spec.y*ml'))
            if not found_files:
                raise SpecNotFoundException(f'Could not find a spec file in {path}')

            if len(found_files) > 1:
                logger.warning('Found more than 1 spec file at this location! Using first file found!')

            path_obj = found_files[0]

        if not path_obj.exists():
            raise SpecNotFoundException(f'Could not find spec file at this location: {path}')

        try:
            text = path_obj.read_text(encoding='utf-8')
            raw_spec = oyaml.safe_load(text)

        except IOError:
            logger.error(f'Could not open spec file {path_obj}')
            raise SpecLoaderException(f'IOError: Could not read spec file {path_obj}')

        except MarkedYAMLError as ye:
            mark = ye.problem_mark
            line = mark.line + 1 if mark is not None else None
            column = f', column {mark.column + 1}' if mark is not None else ''
            raise SpecLoaderException(f'YAMLError in {path_obj}{column}: {ye.problem}', line=line)

        except YAMLError as ye:
            logger.error(ye)
            raise SpecLoaderException(f'YAMLError: Could not parse spec file {path_obj}')

        if raw_spec is None:
            raw_spec = OrderedDict()

        if not isinstance(raw_spec, dict):
            raise SpecLoaderException(f'Spec file {path_obj} must hold a mapping', line=1)

        lines = _key_lines(path_obj, text)
        spec = self.normalize_spec_dict(raw_spec, lines)
        spec['spec_path'] = str(path_obj.absolute())

        return spec

    @staticmethod
    def normalize_spec_dict(spec: dict, lines: Optional[Dict[str, int]] = None) -> dict:
        """
        Checks the keys of a raw spec dictionary and fills in defaults for the missing ones

        :param spec: raw spec dictionary
        :param lines: line numbers of the keys, for diagnostics
        :return: normalized spec dictionary
        """
        lines = lines or dict()
        spec = copy.deepcopy(OrderedDict(spec))

        for key in spec:
            if key not in TOP_LEVEL_KEYS and key != 'spec_path':
                raise SpecLoaderException('Unknown key', line=lines.get(key), field=key)

        scenario = spec.get('scenario') or OrderedDict()
        if not isinstance(scenario, dict):
            raise SpecLoaderException('scenario must be a mapping', line=lines.get('scenario'), field='scenario')

        for key in scenario:
            if key not in SCENARIO_FIELDS:
                raise SpecLoaderException('Unknown scenario field', line=lines.get(f'scenario.{key}'),
                                          field=f'scenario.{key}')

        sweep = spec.get('sweep') or OrderedDict()
        if not isinstance(sweep, dict):
            raise SpecLoaderException('sweep must be a mapping with param and values', line=lines.get('sweep'),
                                      field='sweep')

        for key in sweep:
            if key not in ('param', 'values'):
                raise SpecLoaderException('Unknown sweep key', line=lines.get(f'sweep.{key}'), field=f'sweep.{key}')

        param = ALIASES.get(sweep.get('param', 'num_aps'), sweep.get('param', 'num_aps'))

        spec['name'] = str(spec.get('name', 'custom'))
        spec['preset'] = spec.get('preset')
        spec['scenario'] = OrderedDict(scenario)
        spec['sweep'] = OrderedDict(param=param, values=_as_list(sweep.get('values', scenario.get(param, 32))))
        spec['variants'] = _as_list(spec.get('variants')) or [OrderedDict()]
        spec['memory'] = _as_list(spec.get('memory', 'inf'))
        spec['options'] = _as_list(spec.get('options', 'vc'))
        spec['topologies'] = _as_list(spec.get('topologies', 'daisy_chain'))
        spec['trials'] = spec.get('trials', DEFAULT_TRIALS)
        spec['seed'] = spec.get('seed', 0)
        spec['combining_width'] = spec.get('combining_width', 16)

        for index, variant in enumerate(spec['variants']):
            if not isinstance(variant, dict):
                raise SpecLoaderException('Each variant must be a mapping', line=lines.get('variants'),
                                          field=f'variants[{index}]')

            for key in variant:
                if ALIASES.get(key, key) not in SCENARIO_FIELDS:
                    raise SpecLoaderException('Unknown scenario field in variant', line=lines.get('variants'),
                                              field=f'variants[{index}].{key}')

        spec['variants'] = [OrderedDict((ALIASES.get(k, k), v) for k, v in variant.items())
                            for variant in spec['variants']]
        spec['_lines'] = lines

        return spec

    @staticmethod
    def apply_overrides(spec: dict, overrides: List[str]) -> dict:
        """
        Applies 'key=value' overrides to a normalized spec dictionary. Scenario fields that are also the sweep
        parameter collapse the sweep to that single value.

        :param spec: normalized spec dictionary
        :param overrides: list of 'key=value' strings, values in YAML syntax
        :return: new spec dictionary
        """
        spec = copy.deepcopy(spec)

        for override in overrides:
            key, sep, raw = override.partition('=')
            key = key.strip()
            if not sep or not key:
                raise SpecLoaderException(f'Override must look like key=value, got {override!r}', field=override)

            try:
                value = yaml.safe_load(raw) if raw.strip() else None

            except YAMLError:
                raise SpecLoaderException(f'Could not parse override value {raw!r}', field=key)

            target = ALIASES.get(key, key)

            if target in SCENARIO_FIELDS:
                spec['scenario'][target] = value
                if spec['sweep']['param'] == target:
                    spec['sweep']['values'] = _as_list(value)

                for variant in spec['variants']:
                    variant.pop(target, None)

            elif target == 'memory':
                spec['memory'] = _as_list(value)

            elif target == 'options':
                spec['options'] = _as_list(value)

            elif target == 'topologies':
                spec['topologies'] = _as_list(value)

            elif target == 'trials':
                spec['trials'] = value

            elif target == 'seed':
                spec['seed'] = value

            elif target == 'sweep_param':
                spec['sweep']['param'] = ALIASES.get(value, value)

            elif target == 'sweep_values':
                spec['sweep']['values'] = _as_list(value)

            elif target in ('name', 'combining_width'):
                spec[target] = value

            else:
                raise SpecLoaderException('Unknown override key', field=key)

        return spec

    @staticmethod
    def create_spec(spec: dict) -> ExperimentSpec:
        """
        Creates an ExperimentSpec from a normalized spec dictionary

        :param spec: normalized spec dictionary
        :return: validated ExperimentSpec
        """
        lines = spec.get('_lines', dict())

        def build(field_name, builder, value):
            try:
                return builder(value)

            except (InvalidConfigurationException, ValueError, TypeError) as err:
                raise SpecLoaderException(str(err), line=lines.get(field_name), field=field_name)

        scenario_fields = _coerce_scenario(spec['scenario'])
        for name, value in scenario_fields.items():
            _check_field_type(name, value, lines.get(f'scenario.{name}'), f'scenario.{name}')

        variants = [_coerce_scenario(v) for v in spec['variants']]
        for index, variant in enumerate(variants):
            for name, value in variant.items():
                _check_field_type(name, value, lines.get('variants'), f'variants[{index}].{name}')

        sweep_param = spec['sweep']['param']
        sweep_values = [_coerce_scenario({sweep_param: v})[sweep_param] for v in spec['sweep']['values']]
        for value in sweep_values:
            _check_field_type(sweep_param, value, lines.get('sweep.values'), 'sweep.values')

        scenario = build('scenario', lambda s: ScenarioConfig(**s), scenario_fields)
        preset = build('preset', lambda p: FigurePreset.parse(p) if p else None, spec.get('preset'))

        experiment = ExperimentSpec(
            name=spec['name'],
            scenario=scenario,
            sweep=SweepAxis(sweep_param, sweep_values),
            variants=[dict(v) for v in variants],
            memory_models=build('memory', lambda ms: [parse_memory_model(m) for m in ms], spec['memory']),
            options=build('options', lambda os_: [CompressionOption.parse(o) for o in os_], spec['options']),
            topologies=build('topologies', lambda ts: [TopologyKind.parse(t) for t in ts], spec['topologies']),
            num_trials=build('trials', int, spec['trials']),
            base_seed=build('seed', int, spec['seed']),
            figure_preset=preset,
            combining_width=build('combining_width', int, spec['combining_width']),
        )

        return experiment.validate()

    def load_preset(self, name: Union[str, FigurePreset], overrides: Optional[List[str]] = None) -> ExperimentSpec:
        """
        Loads one of the figure presets shipped in the assets directory

        :param name: preset name
        :param overrides: list of 'key=value' overrides
        :return: ExperimentSpec at full scale
        """
        preset = FigurePreset.parse(name)
        path = PRESET_DIR / f'{preset.value.lower()}.spec.yaml'

        if not path.exists():
            raise UnknownPresetException(f'No preset definition for {preset.value}', field='preset')

        return self.load_spec_from_path(path, overrides)


def figure_preset(name: Union[str, FigurePreset], desk: bool = False, custom: Optional[ExperimentSpec] = None,
                  overrides: Optional[List[str]] = None) -> ExperimentSpec:
    """
    Returns the spec of a named figure

    :param name: preset name such as 'Fig3', or 'Custom' to echo a user spec
    :param desk: scale the preset down to desktop size
    :param custom: the user spec returned for 'Custom'
    :param overrides: list of 'key=value' overrides applied to the preset
    :return: ExperimentSpec
    """
    try:
        preset = FigurePreset.parse(name)

    except InvalidConfigurationException:
        raise UnknownPresetException(f'Unknown figure preset: {name}', field='preset')

    if preset == FigurePreset.CUSTOM:
        if custom is None:
            raise UnknownPresetException('The Custom preset needs a spec to echo', field='preset')

        return custom

    spec = SpecLoader().load_preset(preset, overrides)

    return desk_scale(spec).validate() if desk else spec
