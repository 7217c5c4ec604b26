import abplan
def test_import():
    assert abplan.approx_sin(90) == 1.0
