class HeunFlowException(Exception):
    pass


class HeunFlowParamsException(HeunFlowException):
    pass


class HeunFlowConvergenceException(HeunFlowException):
    pass


class HeunFlowSeriesException(HeunFlowException):
    pass


class HeunFlowFitException(HeunFlowException):
    pass


class HeunFlowResultException(HeunFlowException):
    pass


class HeunFlowConfigException(HeunFlowException):
    pass


class HeunFlowCLIException(HeunFlowException):
    pass
