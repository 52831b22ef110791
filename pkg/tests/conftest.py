import pytest

from toric_frobenius import builtin_fan, compute_class_group
from toric_frobenius.fan import BUILTIN_NAMES


@pytest.fixture(params=BUILTIN_NAMES)
def builtin(request):
    fan = builtin_fan(request.param)
    return fan, compute_class_group(fan)


def classgroup_of(name):
    fan = builtin_fan(name)
    return fan, compute_class_group(fan)
