from . import runners, schemas
from .app import app

__all__ = ["app", "runners", "schemas"]
