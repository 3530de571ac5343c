import os

from dotenv import load_dotenv

load_dotenv()  # charge les variables d'environnement depuis .env

LOG_DIR = os.getenv("WLU_LOG_DIR", os.path.join(os.getcwd(), "log"))
LOG_LEVEL = os.getenv("WLU_LOG_LEVEL", "INFO").upper()

DEFAULT_SEED = int(os.getenv("WLU_SEED", "20240521"))
JACOBIAN_SAFETY = float(os.getenv("WLU_JACOBIAN_SAFETY", "1.5"))
CORPUS_COUNT = int(os.getenv("WLU_CORPUS_COUNT", "500"))
