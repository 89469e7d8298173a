from .cli_controller import CliController

__all__ = ["CliController"]
