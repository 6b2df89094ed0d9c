# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

import sys

from .cli import main

sys.exit(main())
