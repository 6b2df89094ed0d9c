# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

from pathlib import Path

import setuptools

requirements = Path("requirements.txt").read_text().rstrip("\n").split("\n")

setuptools.setup(
    name="bucketwidth",
    description="Exact bandwidth and line distortion solvers for small graphs.",
    packages=["bucketwidth", "bucketwidth.distortion"],
    install_requires=requirements,
    entry_points={"console_scripts": ["bucketwidth = bucketwidth.cli:main"]},
)
