from collections import namedtuple

IsometryReport = namedtuple('IsometryReport', 'ok deviation gram')

SweepRow = namedtuple('SweepRow', 'x f1 f2 delta')

Optimum = namedtuple('Optimum', 'ab q p f2')

Minimax = namedtuple('Minimax', 'a_star ab_star A_star value grid_value')

CurveRow = namedtuple('CurveRow', 'a ab q p f2 limit')

CheckResult = namedtuple('CheckResult', 'name ok deviation tolerance')

PublishedRow = namedtuple('PublishedRow', 'key f2_min x_at_min f2_max x_at_max f2_sd min_is_limit max_is_limit')
