"""Verbose logging shared by the analysis classes."""


class VerboseMixin:
    """
    Adds the ``log`` method used by every analysis class.

    Classes set ``self.verbose`` in their constructor; messages are printed
    with the class name as prefix, e.g. ``[ForwardSolver] 4000 steps``.
    """

    verbose: bool = False

    def log(self, message: str) -> None:
        """
        Print a log message if verbose mode is enabled.

        Args:
            message (str): Message to print.
        """
        if self.verbose:
            print(f"[{self.__class__.__name__}] {message}")
