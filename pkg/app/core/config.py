# app/core/config.py
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Enumeration caps
    ORDER_CAP: int = 20000
    COHOMOLOGY_CAP: int = 72
    DEGREE_CAP: int = 5000

    # Depth of semidirect-decomposition chains explored by the rule engine
    CHAIN_DEPTH: int = 3

    # Finite-field moduli standing in for characteristic-0 cyclotomic entries
    ZETA5_MODULUS: int = 11
    GPLUS_MODULUS: int = 25
    REP_MODULUS: int = 73
    OMEGA: int = 2

    LOG_LEVEL: str = "INFO"

    class Config:
        env_file = ".env"
        case_sensitive = True


# Create a global settings instance
settings = Settings()
