"""Exception types shared by the package.

Every error carries a short machine-readable ``kind`` so the command line
front end can turn it into a structured JSON object.
"""


class ArtifactError(Exception):
    kind = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def as_dict(self):
        out = {"error": self.kind, "message": self.message}
        if self.details:
            out["details"] = {k: _plain(v) for k, v in sorted(self.details.items())}
        return out


class InputError(ArtifactError):
    kind = "input_error"


class NotLocalError(InputError):
    kind = "not_local"


class UnsupportedExtension(InputError):
    kind = "unsupported_extension"


class PreconditionError(ArtifactError):
    kind = "precondition"


class CapExceeded(ArtifactError):
    kind = "cap_exceeded"


class NotAGroupError(ArtifactError):
    kind = "not_a_group"


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if hasattr(v, "item"):
        return v.item()
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return str(v)
