from .env import env

version = "0.1.0"
