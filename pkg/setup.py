from setuptools import setup

setup(
    name='sqfreeze',
    version='1.0.0',
    description='Statistical qubit freezing for Ising and QUBO problems, with a small-system spectrum analyzer',
    license='BSD',
    packages=['sqf'],
    include_package_data=True,
    install_requires=[
        'numpy',
        'scipy',
        'numba',
    ],
    scripts=[
        'sqfreeze.py'
    ],
    entry_points={
        'console_scripts': [
            'sqfreeze = sqfreeze:main',
        ],
    },
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: BSD License',
        'Topic :: Scientific/Engineering :: Physics',
    ],
)
