import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'bellowlab.settings')
django.setup()
