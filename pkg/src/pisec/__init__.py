"""Applied-pi secrecy analysis: deciding when reachability secrecy transfers
to indistinguishability secrecy, with all supporting symbolic machinery."""

__version__ = "0.1.0"
