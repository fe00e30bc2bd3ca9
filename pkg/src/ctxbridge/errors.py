"""Exception hierarchy shared by every subsystem.

Names that would shadow Python builtins carry a prefix (ContractSyntaxError,
TableIoError, TableFormatError); everything else keeps its domain name.
"""

from __future__ import annotations


class BridgeError(Exception):
    """Base class for all typed errors raised by this package."""


# --- contract ---------------------------------------------------------------

class ContractSyntaxError(BridgeError):
    def __init__(self, line: int, col: int, detail: str):
        super().__init__(f"line {line}, col {col}: {detail}")
        self.line = line
        self.col = col
        self.detail = detail


class DuplicateOperation(BridgeError):
    def __init__(self, name: str):
        super().__init__(f"duplicate operation {name!r}")
        self.name = name


class MissingNamespace(BridgeError):
    pass


class UnknownOperation(BridgeError):
    def __init__(self, name: str):
        super().__init__(f"unknown operation {name!r}")
        self.name = name


class InvalidEndpoint(BridgeError):
    pass


class UnresolvableTarget(BridgeError):
    pass


# --- envelope ---------------------------------------------------------------

class MalformedEnvelope(BridgeError):
    def __init__(self, position: int, detail: str):
        super().__init__(f"offset {position}: {detail}")
        self.position = position
        self.detail = detail


class UnknownKind(BridgeError):
    def __init__(self, kind: str):
        super().__init__(f"unknown message kind {kind!r}")
        self.kind = kind


class TypeMismatch(BridgeError):
    def __init__(self, arg: str, detail: str = ""):
        super().__init__(f"arg {arg!r}: {detail}" if detail else f"arg {arg!r}")
        self.arg = arg
        self.detail = detail


# --- registry ---------------------------------------------------------------

class InvalidProfile(BridgeError):
    pass


class UnknownUser(BridgeError):
    def __init__(self, user_id: str):
        super().__init__(f"unknown user {user_id!r}")
        self.user_id = user_id


class UnknownService(BridgeError):
    def __init__(self, id_service: str):
        super().__init__(f"unknown service {id_service!r}")
        self.id_service = id_service


class TableIoError(BridgeError):
    def __init__(self, table: str, detail: str):
        super().__init__(f"table {table!r}: {detail}")
        self.table = table
        self.detail = detail


class TableFormatError(BridgeError):
    def __init__(self, line: int, detail: str):
        super().__init__(f"line {line}: {detail}")
        self.line = line
        self.detail = detail


# --- weaver -----------------------------------------------------------------

class PointcutSyntaxError(BridgeError):
    pass


class DuplicateAspect(BridgeError):
    def __init__(self, aspect_id: str):
        super().__init__(f"aspect {aspect_id!r} already woven")
        self.aspect_id = aspect_id


class UnknownAspect(BridgeError):
    def __init__(self, aspect_id: str):
        super().__init__(f"aspect {aspect_id!r} not woven")
        self.aspect_id = aspect_id


class UnknownAction(BridgeError):
    def __init__(self, action_id: str):
        super().__init__(f"advice action {action_id!r} not registered")
        self.action_id = action_id


# --- assembly platform ------------------------------------------------------

class DuplicateComponent(BridgeError):
    def __init__(self, component_id: str):
        super().__init__(f"component {component_id!r} already registered")
        self.component_id = component_id


class UnknownComponent(BridgeError):
    def __init__(self, component_id: str):
        super().__init__(f"unknown component {component_id!r}")
        self.component_id = component_id


class UnknownEndpoint(BridgeError):
    pass


class DuplicateLink(BridgeError):
    pass


class UnknownLink(BridgeError):
    pass


class UnknownAA(BridgeError):
    def __init__(self, aa_id: str):
        super().__init__(f"aspect assembly {aa_id!r} not applied")
        self.aa_id = aa_id


class ConflictingAA(BridgeError):
    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


# --- reflective orb ---------------------------------------------------------

class DuplicateName(BridgeError):
    def __init__(self, name: str):
        super().__init__(f"name {name!r} already bound")
        self.name = name


class UnknownObject(BridgeError):
    def __init__(self, ior: str):
        super().__init__(f"no object for {ior!r}")
        self.ior = ior


class MalformedIor(BridgeError):
    def __init__(self, ior: str):
        super().__init__(f"malformed ior {ior!r}")
        self.ior = ior


class UnknownMethod(BridgeError):
    def __init__(self, method: str):
        super().__init__(f"unknown method {method!r}")
        self.method = method


class DuplicateInterceptor(BridgeError):
    def __init__(self, interceptor_id: str):
        super().__init__(f"interceptor {interceptor_id!r} already in chain")
        self.interceptor_id = interceptor_id


class UnknownInterceptor(BridgeError):
    def __init__(self, interceptor_id: str):
        super().__init__(f"interceptor {interceptor_id!r} not in chain")
        self.interceptor_id = interceptor_id


# --- gateway ----------------------------------------------------------------

class DuplicateUrl(BridgeError):
    def __init__(self, url: str):
        super().__init__(f"url {url!r} already exported")
        self.url = url


class TransportError(BridgeError):
    pass


class RemoteFault(BridgeError):
    def __init__(self, code: str, reason: str):
        super().__init__(f"{code}: {reason}")
        self.code = code
        self.reason = reason


class RequestVetoed(BridgeError):
    def __init__(self, reason: str):
        super().__init__(f"vetoed: {reason}")
        self.reason = reason


class NoLocationFix(BridgeError):
    def __init__(self, user_id: str):
        super().__init__(f"no location on record for user {user_id!r}")
        self.user_id = user_id


# --- adaptation -------------------------------------------------------------

class UnknownField(BridgeError):
    def __init__(self, field: str):
        super().__init__(f"field {field!r} is not overridable")
        self.field = field


# --- harness ----------------------------------------------------------------

class ScenarioSyntaxError(BridgeError):
    def __init__(self, line: int, detail: str):
        super().__init__(f"line {line}: {detail}")
        self.line = line
        self.detail = detail


class ExpectationFailed(BridgeError):
    """Aggregate of every failed scenario expectation, with tick context."""

    def __init__(self, failures: list[tuple[int, str, str, str]]):
        # each failure: (tick, what, expected, actual)
        lines = [
            f"tick {tick}: {what}: expected {expected!r}, got {actual!r}"
            for tick, what, expected, actual in failures
        ]
        super().__init__("; ".join(lines))
        self.failures = failures


class BindError(BridgeError):
    pass
