# -*- coding: utf-8 -*-

from setuptools import setup, find_packages

setup(
    name="pscausal",
    version='0.3.0',
    description='Two-step Bayesian propensity score estimation for clustered observational data.',
    packages=find_packages(exclude=['tests', 'tests.*']),
    include_package_data=True,
    zip_safe=False,
    python_requires='>=3.8',
    install_requires=[
        'Flask>=2.0,<2.3',
        'Werkzeug>=2.0,<2.3',
        'click>=8.0',
        'blinker>=1.4',
        'jsonpickle>=2.0',
        'numpy>=1.20',
        'scipy>=1.7',
        'pandas>=1.5',
        'psutil>=5.0',
    ],
    extras_require={
        'test': [
            'Flask-Testing>=0.8.1',
            'mock>=3.0',
            'pytest>=6.0',
        ],
    },
    entry_points={
        'console_scripts': [
            'pscausal = manage:cli',
        ],
    },
    py_modules=['manage'],
    test_suite='tests',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ]
)
