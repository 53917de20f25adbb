"""Frozen rotation systems of the regime templates.

Generated by ``tools/find_templates.py``; edit that script, not this file.
Vertex and edge names follow the script: heart connections ``hLM``/``hML``,
winding separatrices ``uL``, ``sL``, ``uEw``, ``sIw``, limit cycles ``c_in``
(inside the tear, repelling) and ``c_out`` (around the polycycle, attracting).
"""

TEMPLATE_DATA = {'NegEps': {'edges': {'hLM': ('L', 'M', 'SC'),
                      'hML': ('M', 'L', 'SC'),
                      'l1': ('t1', 't1', 'ITL'),
                      'l2': ('t2', 't2', 'ITL'),
                      'l3': ('t3', 't3', 'OTL'),
                      'l4': ('t4', 't4', 'OTL'),
                      'lc_in': ('c_in', 'c_in', 'LC'),
                      'lc_out': ('c_out', 'c_out', 'LC'),
                      'sE1': ('r', 'E', 'SS'),
                      'sE2': ('r', 'E', 'SS'),
                      'sIo': ('r2', 'I', 'SS'),
                      'sIw': ('t4', 'I', 'STS'),
                      'sL': ('t3', 'L', 'STS'),
                      'sM': ('r3', 'M', 'SS'),
                      'uEo': ('E', 'a2', 'US'),
                      'uEw': ('E', 't2', 'UTS'),
                      'uI1': ('I', 'a', 'US'),
                      'uI2': ('I', 'a', 'US'),
                      'uL': ('L', 't1', 'UTS'),
                      'uM': ('M', 'a3', 'US')},
            'nesting': {('E', 'I'): ('l4', 1),
                        ('E', 'L'): ('l1', 1),
                        ('E', 'c_in'): ('lc_in', 0),
                        ('E', 'c_out'): ('lc_out', 0),
                        ('I', 'E'): ('l2', 1),
                        ('I', 'L'): ('l3', 1),
                        ('I', 'c_in'): ('lc_in', 1),
                        ('I', 'c_out'): ('lc_out', 1),
                        ('L', 'E'): ('l2', 1),
                        ('L', 'I'): ('l4', 1),
                        ('L', 'c_in'): ('lc_in', 0),
                        ('L', 'c_out'): ('lc_out', 1),
                        ('c_in', 'E'): ('l2', 1),
                        ('c_in', 'I'): ('l4', 1),
                        ('c_in', 'L'): ('l3', 1),
                        ('c_in', 'c_out'): ('lc_out', 1),
                        ('c_out', 'E'): ('l2', 1),
                        ('c_out', 'I'): ('l4', 1),
                        ('c_out', 'L'): ('l1', 1),
                        ('c_out', 'c_in'): ('lc_in', 0)},
            'rotation': {'E': (('uEo', 0), ('sE1', 1), ('uEw', 0), ('sE2', 1)),
                         'I': (('uI1', 0), ('sIo', 1), ('uI2', 0), ('sIw', 1)),
                         'L': (('hLM', 0), ('hML', 1), ('uL', 0), ('sL', 1)),
                         'M': (('hML', 0), ('sM', 1), ('uM', 0), ('hLM', 1)),
                         'a': (('uI1', 1), ('uI2', 1)),
                         'a2': (('uEo', 1),),
                         'a3': (('uM', 1),),
                         'c_in': (('lc_in', 0), ('lc_in', 1)),
                         'c_out': (('lc_out', 0), ('lc_out', 1)),
                         'r': (('sE1', 0), ('sE2', 0)),
                         'r2': (('sIo', 0),),
                         'r3': (('sM', 0),),
                         't1': (('l1', 0), ('l1', 1), ('uL', 1)),
                         't2': (('l2', 0), ('l2', 1), ('uEw', 1)),
                         't3': (('l3', 0), ('l3', 1), ('sL', 0)),
                         't4': (('l4', 0), ('l4', 1), ('sIw', 0))},
            'vertices': {'E': 'SP:saddle',
                         'I': 'SP:saddle',
                         'L': 'SP:saddle',
                         'M': 'SP:saddle',
                         'a': 'SP:sink',
                         'a2': 'SP:sink',
                         'a3': 'SP:sink',
                         'c_in': 'VLC',
                         'c_out': 'VLC',
                         'r': 'SP:source',
                         'r2': 'SP:source',
                         'r3': 'SP:source',
                         't1': 'TV',
                         't2': 'TV',
                         't3': 'TV',
                         't4': 'TV'}},
 'PosEpsEI': {'edges': {'cEI': ('E', 'I', 'SC'),
                        'hLM': ('L', 'M', 'SC'),
                        'hML': ('M', 'L', 'SC'),
                        'sE1': ('r', 'E', 'SS'),
                        'sE2': ('r', 'E', 'SS'),
                        'sIo': ('r2', 'I', 'SS'),
                        'sL': ('r', 'L', 'SS'),
                        'sM': ('r3', 'M', 'SS'),
                        'uEo': ('E', 'a2', 'US'),
                        'uI1': ('I', 'a', 'US'),
                        'uI2': ('I', 'a', 'US'),
                        'uL': ('L', 'a', 'US'),
                        'uM': ('M', 'a3', 'US')},
              'nesting': {},
              'rotation': {'E': (('uEo', 0), ('sE1', 1), ('cEI', 0), ('sE2', 1)),
                           'I': (('uI1', 0), ('sIo', 1), ('uI2', 0), ('cEI', 1)),
                           'L': (('hLM', 0), ('hML', 1), ('uL', 0), ('sL', 1)),
                           'M': (('hML', 0), ('sM', 1), ('uM', 0), ('hLM', 1)),
                           'a': (('uI2', 1), ('uI1', 1), ('uL', 1)),
                           'a2': (('uEo', 1),),
                           'a3': (('uM', 1),),
                           'r': (('sE1', 0), ('sE2', 0), ('sL', 0)),
                           'r2': (('sIo', 0),),
                           'r3': (('sM', 0),)},
              'vertices': {'E': 'SP:saddle',
                           'I': 'SP:saddle',
                           'L': 'SP:saddle',
                           'M': 'SP:saddle',
                           'a': 'SP:sink',
                           'a2': 'SP:sink',
                           'a3': 'SP:sink',
                           'r': 'SP:source',
                           'r2': 'SP:source',
                           'r3': 'SP:source'}},
 'PosEpsGeneric': {'edges': {'hLM': ('L', 'M', 'SC'),
                             'hML': ('M', 'L', 'SC'),
                             'sE1': ('r', 'E', 'SS'),
                             'sE2': ('r', 'E', 'SS'),
                             'sIo': ('r2', 'I', 'SS'),
                             'sIw': ('r', 'I', 'SS'),
                             'sL': ('r', 'L', 'SS'),
                             'sM': ('r3', 'M', 'SS'),
                             'uEo': ('E', 'a2', 'US'),
                             'uEw': ('E', 'a', 'US'),
                             'uI1': ('I', 'a', 'US'),
                             'uI2': ('I', 'a', 'US'),
                             'uL': ('L', 'a', 'US'),
                             'uM': ('M', 'a3', 'US')},
                   'nesting': {},
                   'rotation': {'E': (('uEo', 0), ('sE1', 1), ('uEw', 0), ('sE2', 1)),
                                'I': (('uI1', 0), ('sIo', 1), ('uI2', 0), ('sIw', 1)),
                                'L': (('hLM', 0), ('hML', 1), ('uL', 0), ('sL', 1)),
                                'M': (('hML', 0), ('sM', 1), ('uM', 0), ('hLM', 1)),
                                'a': (('uEw', 1), ('uI2', 1), ('uI1', 1), ('uL', 1)),
                                'a2': (('uEo', 1),),
                                'a3': (('uM', 1),),
                                'r': (('sE1', 0), ('sE2', 0), ('sL', 0), ('sIw', 0)),
                                'r2': (('sIo', 0),),
                                'r3': (('sM', 0),)},
                   'vertices': {'E': 'SP:saddle',
                                'I': 'SP:saddle',
                                'L': 'SP:saddle',
                                'M': 'SP:saddle',
                                'a': 'SP:sink',
                                'a2': 'SP:sink',
                                'a3': 'SP:sink',
                                'r': 'SP:source',
                                'r2': 'SP:source',
                                'r3': 'SP:source'}},
 'PosEpsLE': {'edges': {'cEL': ('E', 'L', 'SC'),
                        'hLM': ('L', 'M', 'SC'),
                        'hML': ('M', 'L', 'SC'),
                        'sE1': ('r', 'E', 'SS'),
                        'sE2': ('r', 'E', 'SS'),
                        'sIo': ('r2', 'I', 'SS'),
                        'sIw': ('r', 'I', 'SS'),
                        'sM': ('r3', 'M', 'SS'),
                        'uEo': ('E', 'a2', 'US'),
                        'uI1': ('I', 'a', 'US'),
                        'uI2': ('I', 'a', 'US'),
                        'uL': ('L', 'a', 'US'),
                        'uM': ('M', 'a3', 'US')},
              'nesting': {},
              'rotation': {'E': (('uEo', 0), ('sE1', 1), ('cEL', 0), ('sE2', 1)),
                           'I': (('uI1', 0), ('sIo', 1), ('uI2', 0), ('sIw', 1)),
                           'L': (('hLM', 0), ('hML', 1), ('uL', 0), ('cEL', 1)),
                           'M': (('hML', 0), ('sM', 1), ('uM', 0), ('hLM', 1)),
                           'a': (('uI2', 1), ('uI1', 1), ('uL', 1)),
                           'a2': (('uEo', 1),),
                           'a3': (('uM', 1),),
                           'r': (('sE1', 0), ('sE2', 0), ('sIw', 0)),
                           'r2': (('sIo', 0),),
                           'r3': (('sM', 0),)},
              'vertices': {'E': 'SP:saddle',
                           'I': 'SP:saddle',
                           'L': 'SP:saddle',
                           'M': 'SP:saddle',
                           'a': 'SP:sink',
                           'a2': 'SP:sink',
                           'a3': 'SP:sink',
                           'r': 'SP:source',
                           'r2': 'SP:source',
                           'r3': 'SP:source'}},
 'PosEpsLI': {'edges': {'cLI': ('L', 'I', 'SC'),
                        'hLM': ('L', 'M', 'SC'),
                        'hML': ('M', 'L', 'SC'),
                        'sE1': ('r', 'E', 'SS'),
                        'sE2': ('r', 'E', 'SS'),
                        'sIo': ('r2', 'I', 'SS'),
                        'sL': ('r', 'L', 'SS'),
                        'sM': ('r3', 'M', 'SS'),
                        'uEo': ('E', 'a2', 'US'),
                        'uEw': ('E', 'a', 'US'),
                        'uI1': ('I', 'a', 'US'),
                        'uI2': ('I', 'a', 'US'),
                        'uM': ('M', 'a3', 'US')},
              'nesting': {},
              'rotation': {'E': (('uEo', 0), ('sE1', 1), ('uEw', 0), ('sE2', 1)),
                           'I': (('uI1', 0), ('sIo', 1), ('uI2', 0), ('cLI', 1)),
                           'L': (('hLM', 0), ('hML', 1), ('cLI', 0), ('sL', 1)),
                           'M': (('hML', 0), ('sM', 1), ('uM', 0), ('hLM', 1)),
                           'a': (('uEw', 1), ('uI2', 1), ('uI1', 1)),
                           'a2': (('uEo', 1),),
                           'a3': (('uM', 1),),
                           'r': (('sE1', 0), ('sE2', 0), ('sL', 0)),
                           'r2': (('sIo', 0),),
                           'r3': (('sM', 0),)},
              'vertices': {'E': 'SP:saddle',
                           'I': 'SP:saddle',
                           'L': 'SP:saddle',
                           'M': 'SP:saddle',
                           'a': 'SP:sink',
                           'a2': 'SP:sink',
                           'a3': 'SP:sink',
                           'r': 'SP:source',
                           'r2': 'SP:source',
                           'r3': 'SP:source'}}}
