# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

from .output import OutputRecord, read_csv_text

__all__ = ['OutputRecord', 'read_csv_text']
