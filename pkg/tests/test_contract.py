import pytest
from hypothesis import given

from ctxbridge.contract import (
    Contract,
    make_proxy,
    make_stub,
    operation,
    parse_contract,
    render_contract,
    soap_action,
)
from ctxbridge.errors import (
    ContractSyntaxError,
    DuplicateOperation,
    InvalidEndpoint,
    MissingNamespace,
    UnknownOperation,
    UnresolvableTarget,
)
from ctxbridge.fixtures import ENTERPRISE_CONTRACT_DOC

from .strategies import contracts

ENTERPRISE = parse_contract(ENTERPRISE_CONTRACT_DOC)


def test_parse_enterprise_document():
    assert ENTERPRISE.name == "Enterprise"
    assert ENTERPRISE.namespace == "http://Ent"
    (op,) = ENTERPRISE.operations
    assert op.name == "AfficherNormal"
    assert op.input_message == "AfficherNormalRequest"
    assert op.output_message == "AfficherNormalResponse"
    assert op.input_action == "urn:AfficherNormal"
    assert op.output_action == "urn:AfficherNormalResponse"
    assert op.params == ()
    assert op.returns == "string"


def test_enterprise_golden_bytes(golden_dir):
    golden = (golden_dir / "enterprise_contract.xml").read_bytes()
    assert render_contract(ENTERPRISE).encode("utf-8") == golden


def test_parse_tolerates_whitespace_between_elements():
    spaced = ENTERPRISE_CONTRACT_DOC.replace("><", ">\n  <")
    assert parse_contract(spaced) == ENTERPRISE


def test_zero_operation_contract():
    c = parse_contract('<contract name="Empty" ns="urn:x"></contract>')
    assert c.operations == ()


def test_shorthand_operation_expansion():
    c = parse_contract('<contract name="C" ns="urn:x">'
                       '<operation name="Ping"/></contract>')
    (op,) = c.operations
    assert op.input_message == "PingRequest"
    assert op.output_message == "PingResponse"
    assert op.input_action == "urn:Ping"
    assert op.output_action == "urn:PingResponse"
    assert op.returns == "unit"


def test_explicit_message_overrides_shorthand():
    c = parse_contract('<contract name="C" ns="urn:x"><operation name="Q">'
                       '<input message="Custom" action="urn:Q"/>'
                       "</operation></contract>")
    assert c.operations[0].input_message == "Custom"
    assert c.operations[0].output_message == "QResponse"


def test_params_parse_in_order():
    c = parse_contract('<contract name="C" ns="urn:x"><operation name="Q">'
                       '<param name="a" type="string"/>'
                       '<param name="b" type="int"/>'
                       '<returns type="bool"/></operation></contract>')
    assert c.operations[0].params == (("a", "string"), ("b", "int"))
    assert c.operations[0].returns == "bool"


def test_missing_namespace():
    with pytest.raises(MissingNamespace):
        parse_contract('<contract name="C"></contract>')
    with pytest.raises(MissingNamespace):
        parse_contract('<contract name="C" ns=""></contract>')


def test_duplicate_operation_names_second_occurrence():
    doc = ('<contract name="C" ns="urn:x">'
           '<operation name="A"/><operation name="A"/></contract>')
    with pytest.raises(DuplicateOperation) as exc:
        parse_contract(doc)
    assert exc.value.name == "A"


def test_syntax_error_carries_line_and_col():
    with pytest.raises(ContractSyntaxError) as exc:
        parse_contract('<contract name="C" ns="urn:x">\n  <bogus/></contract>')
    assert exc.value.line == 2
    assert exc.value.col >= 1


def test_malformed_document_reports_position():
    with pytest.raises(ContractSyntaxError):
        parse_contract("<contract")
    with pytest.raises(ContractSyntaxError):
        parse_contract("")
    with pytest.raises(ContractSyntaxError):
        parse_contract(ENTERPRISE_CONTRACT_DOC + "junk")


def test_child_order_is_enforced():
    with pytest.raises(ContractSyntaxError):
        parse_contract('<contract name="C" ns="urn:x"><operation name="Q">'
                       '<returns type="bool"/><param name="a" type="int"/>'
                       "</operation></contract>")


@given(contracts())
def test_parse_render_inverse(c):
    assert parse_contract(render_contract(c)) == c


@given(contracts())
def test_render_parse_fixpoint(c):
    doc = render_contract(c)
    once = render_contract(parse_contract(doc))
    assert render_contract(parse_contract(once)) == once == doc


def test_soap_action_concatenates_without_separator():
    assert soap_action(ENTERPRISE, "AfficherNormal") == "http://EntAfficherNormal"


def test_soap_action_empty_namespace():
    c = Contract("C", " ", (operation("x"),))
    # namespace must be non-empty per the contract invariant, but soap_action
    # itself is pure concatenation
    assert soap_action(Contract("C", "", (operation("x"),)), "x") == "x"
    assert soap_action(c, "x") == " x"


def test_soap_action_unknown_operation():
    with pytest.raises(UnknownOperation):
        soap_action(ENTERPRISE, "Missing")


@given(contracts())
def test_soap_action_is_pure(c):
    for op in c.operations:
        assert soap_action(c, op.name) == soap_action(c, op.name)
        assert soap_action(c, op.name) == c.namespace + op.name


def test_make_proxy_accepts_paper_url():
    proxy = make_proxy(ENTERPRISE,
                       "http://192.168.1.2:8080/Enterprise/services/EntImpl")
    assert proxy.contract is ENTERPRISE


@pytest.mark.parametrize("bad", [
    "not a url",
    "http://hostonly.example/path",     # missing port
    "http://host:8080",                 # missing path
    "http://host:8080/",                # empty path
    "://host:8080/path",
    "http://host:notaport/path",
])
def test_make_proxy_rejects_bad_endpoints(bad):
    with pytest.raises(InvalidEndpoint):
        make_proxy(ENTERPRISE, bad)


def test_make_stub_valid_and_invalid():
    stub = make_stub(ENTERPRISE, "orb1", "Enterprise")
    assert stub.target_path == "Enterprise"
    deep = make_stub(ENTERPRISE, "orb1", "com.example.Enterprise")
    assert deep.target_path == "com.example.Enterprise"
    with pytest.raises(UnresolvableTarget):
        make_stub(ENTERPRISE, "orb1", "bad..path")
    with pytest.raises(UnresolvableTarget):
        make_stub(ENTERPRISE, "orb1", "")
    with pytest.raises(UnresolvableTarget):
        make_stub(ENTERPRISE, "bad platform", "Enterprise")
