#                   Copyright (c) 2021, Serum Studio

# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
# THE SOFTWARE.

import re

from setuptools import setup, find_packages


def get_metadata():
    #: Read without importing, numpy may not be installed yet.
    with open("yamabe/__init__.py", encoding="utf-8") as f:
        source = f.read()

    return dict(re.findall(r'^(__\w+__) = "([^"]*)"', source, re.M))


def get_long_description():

    with open("README.md", encoding="utf-8") as f:
        readme = f.read()

    return readme


metadata = get_metadata()

extras_require = {
    "color": ["colorama>=0.4.4"],  #: Color support
    "progress": ["alive-progress>=1.6.2"],  #: With progressbar support
    "test": ["pytest>=6.0"],
}

#: Standard installation with every plugin
extras_require["standard"] = extras_require["color"] + extras_require["progress"]


setup(
    name="yamabe-flow",
    author=metadata["__author__"],
    description=metadata["__desc__"],
    long_description=get_long_description(),
    long_description_content_type="text/markdown",
    version=metadata["__version__"],
    license=metadata["__license__"],
    keywords="yamabe flow,sphere packing,discrete curvature,triangulation,3-manifold".split(","),
    packages=[p for p in find_packages() if "test" not in p],
    package_data={"yamabe.data": ["*.txt"]},
    python_requires=">=3.9",
    install_requires=["numpy>=1.20", "tabulate>=0.8.9"],
    extras_require=extras_require,
    entry_points={"console_scripts": ["yamabe=yamabe.cli:main"]},
    classifiers=[
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Typing :: Typed",
        "Development Status :: 4 - Beta",
        "Programming Language :: Python :: 3 :: Only",
        "Programming Language :: Python :: 3.9",
        "License :: OSI Approved :: MIT License",
    ],
)
