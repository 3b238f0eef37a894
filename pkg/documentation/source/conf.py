# © Copyright the tourax contributors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


# Configuration file for the Sphinx documentation builder.
#
# For the full list of built-in configuration values, see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html
"""Configuration details for Sphinx documentation."""

import sys
from pathlib import Path
from types import ModuleType
from typing import Any, Optional, TypeVar, Union

import sphinx.config
import sphobjinv
import tqdm
from jax.typing import ArrayLike
from sphinx_autodoc_typehints import format_annotation as default_format_annotation

CONF_FILE_PATH = Path(__file__).absolute()
SOURCE_FOLDER_PATH = CONF_FILE_PATH.parent
DOCS_FOLDER_PATH = SOURCE_FOLDER_PATH.parent
REPO_FOLDER_PATH = DOCS_FOLDER_PATH.parent

TQDM_CUSTOM_PATH = SOURCE_FOLDER_PATH / "tqdm.inv"

sys.path.extend([str(DOCS_FOLDER_PATH), str(SOURCE_FOLDER_PATH), str(REPO_FOLDER_PATH)])

# pylint: disable=wrong-import-position
import tourax  # Cannot import until after package has been added to path

# pylint: enable=wrong-import-position


# -- Project information -----------------------------------------------------

# pylint: disable=invalid-name
# pylint: disable=redefined-builtin
project = "tourax"
copyright = "the tourax contributors"
author = "The tourax contributors"
version = "v" + tourax.__version__
# pylint: enable=redefined-builtin
# pylint: enable=invalid-name


# -- General configuration ---------------------------------------------------

# pylint: disable=invalid-name
show_warning_types = True
suppress_warnings = ["config.cache"]
toc_object_entries_show_parents = "hide"  # don't show prefix in secondary TOC
autodoc_typehints = "description"
# pylint: enable=invalid-name

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosectionlabel",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "sphinx_autodoc_typehints",
]

autodoc_default_options = {
    "members": True,
    "class": True,
    "member-order": "bysource",
    "undoc-members": True,
    "show_inheritance": True,
    "exclude-members": "_abc_impl",
}

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "jax": ("https://jax.readthedocs.io/en/latest/", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "networkx": ("https://networkx.org/documentation/stable/", None),
    "tqdm": ("https://tqdm.github.io/docs/", str(TQDM_CUSTOM_PATH)),
}

nitpick_ignore = [
    ("py:class", "Array"),
    ("py:class", "tourax.solvers.base._State"),
    ("py:class", "tourax.solvers.base._Solution"),
    ("py:class", "jaxtyping.Shaped"),
    ("py:class", "jaxtyping.Float"),
    ("py:class", "jaxtyping.Int"),
]

autodoc_custom_types: dict[Any, str] = {
    ArrayLike: ":data:`~jax.typing.ArrayLike`",
}

# custom references for tqdm, which does not support intersphinx
tqdm_refs: dict[str, dict[str, str]] = {
    "py:class": {
        "tqdm.tqdm": "tqdm/#tqdm-objects",
    }
}


def typehints_formatter(
    annotation: Any, config: sphinx.config.Config
) -> Union[str, None]:
    """
    Replace type variables by their bounds and custom aliases by their references.

    :param annotation: The type annotation to be processed.
    :param config: The current configuration being used.
    :returns: A string of reStructured text or None to fall back to the default.
    """
    if isinstance(annotation, TypeVar):
        if annotation.__bound__ is None:
            return default_format_annotation(Any, config)
        return default_format_annotation(annotation.__bound__, config)
    return autodoc_custom_types.get(annotation)


# -- Options for HTML output -------------------------------------------------

# pylint: disable=invalid-name
html_theme = "furo"
# pylint: enable=invalid-name

html_theme_options = {
    "source_directory": "documentation/source/",
}


def create_custom_inv_file(
    module: ModuleType,
    custom_refs: dict[str, dict[str, str]],
    file_name: Optional[str] = None,
) -> None:
    """
    Create an objects.inv file containing custom routes.

    :param module: The module to which this file will refer.
    :param custom_refs: A nested mapping from ``domain:role`` to names and paths.
    :param file_name: The name of the created file, in the same directory as this
        file. If none, the name of the module is used with the suffix ``.inv``.
    """
    inventory = sphobjinv.Inventory()
    inventory.project = module.__name__
    inventory.version = getattr(module, "__version__", None)

    for domain_and_role, mapping in custom_refs.items():
        domain, role = domain_and_role.split(":")
        for name, uri in mapping.items():
            # pylint: disable=abstract-class-instantiated
            inventory.objects.append(
                sphobjinv.DataObjStr(
                    name=name,
                    domain=domain,
                    role=role,
                    priority=str(1),
                    uri=uri,
                    dispname="-",
                )
            )
            # pylint: enable=abstract-class-instantiated

    compressed = sphobjinv.compress(inventory.data_file(contract=True))
    if file_name is None:
        file_name = f"{module.__name__}.inv"
    sphobjinv.writebytes(SOURCE_FOLDER_PATH / file_name, compressed)


if not TQDM_CUSTOM_PATH.exists():
    print("Creating custom inventory file for tqdm")
    create_custom_inv_file(tqdm, tqdm_refs)
