# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

__version__ = "0.1.0"
