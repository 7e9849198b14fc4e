# -*- coding: utf-8 -*-

from .app import create_app
