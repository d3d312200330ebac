"""Configuration settings for the subshift toolkit."""

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    log_level: str = Field(default="warning", description="Logging level (debug, info, warning, error, critical)")

    # Resource limits
    max_atoms: int = Field(default=20000, description="Maximum number of atoms in one snapshot level")
    max_relations: int = Field(
        default=50000,
        description="Maximum size of the transition-relation monoid explored for graph presentations",
    )

    # CLI defaults
    default_depth: int = Field(default=3, description="Depth used by commands when --depth is omitted")

    # Engine suite
    engine_seed: int = Field(default=0, description="Seed for the random elements added to the engine sample pool")
    engine_samples: int = Field(default=2, ge=0, description="Number of random elements added to the engine sample pool")

    class Config:
        env_prefix = "SUBSHIFT_"
        env_file = ".env"
        env_file_encoding = "utf-8"


settings = Settings()
